#ifndef LCQFT_LCQFT_H_
#define LCQFT_LCQFT_H_

/* C interface to the lcqft core: a lattice laboratory for locally covariant
 * free-field theory (functor axioms, relative Cauchy evolution) and exact
 * BRST/BV cohomology on toy gauge models.
 *
 * All functions returning lcq_status use LCQ_OK (0) for success; on failure
 * lcq_last_error() describes the problem for the calling thread. Strings
 * returned through lcq_* out-parameters are heap-allocated and must be
 * released with lcq_string_free().
 */

#include <stdint.h>

#if defined(_WIN32)
#define LCQ_API __declspec(dllexport)
#else
#define LCQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t lcq_status;

enum {
  LCQ_OK = 0,
  LCQ_ERR_NULL_PTR = 1,
  LCQ_ERR_PARSE = 2,
  LCQ_ERR_INVALID_ARGUMENT = 3,
  LCQ_ERR_SPACETIME_MISMATCH = 4,
  LCQ_ERR_CAUSALLY_RELATED_IMAGES = 5,
  LCQ_ERR_SLAB_TOO_THIN = 6,
  LCQ_ERR_PERTURBATION_NOT_BETWEEN_SLABS = 7,
  LCQ_ERR_UNSUPPORTED_PERTURBATION = 8,
  LCQ_ERR_TRUNCATION_INCONSISTENT = 9,
  LCQ_ERR_NOT_ADMISSIBLE = 10,
  LCQ_ERR_FILE_NOT_FOUND = 11,
  LCQ_ERR_SCHEMA_VIOLATION = 12,
  LCQ_ERR_CHECKS_FAILED = 13,
  LCQ_ERR_INTERNAL = 14
};

LCQ_API const char* lcq_version(void);

/* Thread-local message for the most recent failure. Never NULL. */
LCQ_API const char* lcq_last_error(void);
LCQ_API void lcq_clear_last_error(void);

LCQ_API void lcq_string_free(char* s);

/* ---- spacetimes ---------------------------------------------------------- */

typedef struct lcq_spacetime lcq_spacetime;

/* Builds a lattice spacetime from its JSON description:
 *   {"n_t": int, "n_x": int, "coupling": int|"p/q"|array,
 *    "mass_sq": int|"p/q"|array}
 * or {"components": [ ... ]}. */
LCQ_API lcq_status lcq_spacetime_create(const char* json, lcq_spacetime** out);
LCQ_API void lcq_spacetime_free(lcq_spacetime* m);

LCQ_API int32_t lcq_spacetime_components(const lcq_spacetime* m);
LCQ_API int32_t lcq_spacetime_sites(const lcq_spacetime* m);

/* 1 if (t0,x0) <= (t1,x1) in the causal order of component comp, else 0. */
LCQ_API int32_t lcq_spacetime_causally_leq(const lcq_spacetime* m, int32_t comp,
                                           int32_t t0, int32_t x0, int32_t t1,
                                           int32_t x1);

/* Canonical JSON form of the spacetime. */
LCQ_API lcq_status lcq_spacetime_to_json(const lcq_spacetime* m, char** out_json);

/* ---- verification suites -------------------------------------------------
 * Each runner writes a JSON report (schema: lcq_report_schema) and returns
 * LCQ_OK when every check passed, LCQ_ERR_CHECKS_FAILED when the suite ran
 * but found failures, or another code when it could not run. The report is
 * produced in both cases when out_report_json is non-NULL.
 */

typedef struct lcq_options {
  uint64_t seed;
  int32_t float_mode;    /* 0: exact rational arithmetic */
  double tolerance;      /* float mode only */
  const char* fd_steps;  /* e.g. "1/64,1/128"; NULL for the default */
} lcq_options;

LCQ_API void lcq_options_init(lcq_options* opt);

/* spacetime_json may be NULL: seeded instances only. */
LCQ_API lcq_status lcq_run_axioms(const char* spacetime_json,
                                  const lcq_options* opt, char** out_report_json);

/* mode: "exact" or "fd". */
LCQ_API lcq_status lcq_run_rce(const char* spacetime_json, const char* kappa_json,
                               const char* mode, const lcq_options* opt,
                               char** out_report_json);

LCQ_API lcq_status lcq_run_bv(const char* model_json, int32_t ghost_number,
                              int32_t max_degree, const lcq_options* opt,
                              char** out_report_json);

LCQ_API lcq_status lcq_run_fields(const char* category_json,
                                  const char* candidates_json,
                                  const lcq_options* opt, char** out_report_json);

LCQ_API lcq_status lcq_run_all(const lcq_options* opt, char** out_report_json);

/* Newline-separated check names for a subcommand ("axioms", "rce", "bv",
 * "fields", "all"). */
LCQ_API lcq_status lcq_list_checks(const char* subcommand, char** out_text);

/* The JSON schema reports conform to. */
LCQ_API lcq_status lcq_report_schema(char** out_json);

/* Bundled fixture JSON by name: "spacetime", "kappa", "so3_model",
 * "abelian_model", "sabotage_model", "category", "candidates". */
LCQ_API lcq_status lcq_fixture(const char* name, char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LCQFT_LCQFT_H_ */
