#include "lcqft/lcqft.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "lcqft/fixtures.hpp"
#include "lcqft/lattice.hpp"
#include "lcqft/suites.hpp"

namespace {

thread_local std::string tl_error;

void set_error(const std::string& msg) { tl_error = msg; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

lcq_status status_from(const lcqft::Error& e) {
  using lcqft::ErrorCode;
  switch (e.code()) {
    case ErrorCode::kParse:
      return LCQ_ERR_PARSE;
    case ErrorCode::kInvalidArgument:
      return LCQ_ERR_INVALID_ARGUMENT;
    case ErrorCode::kSpacetimeMismatch:
      return LCQ_ERR_SPACETIME_MISMATCH;
    case ErrorCode::kCausallyRelatedImages:
      return LCQ_ERR_CAUSALLY_RELATED_IMAGES;
    case ErrorCode::kSlabTooThin:
      return LCQ_ERR_SLAB_TOO_THIN;
    case ErrorCode::kPerturbationNotBetweenSlabs:
      return LCQ_ERR_PERTURBATION_NOT_BETWEEN_SLABS;
    case ErrorCode::kUnsupportedPerturbationType:
      return LCQ_ERR_UNSUPPORTED_PERTURBATION;
    case ErrorCode::kTruncationInconsistent:
      return LCQ_ERR_TRUNCATION_INCONSISTENT;
    case ErrorCode::kNotAdmissible:
      return LCQ_ERR_NOT_ADMISSIBLE;
    case ErrorCode::kFileNotFound:
      return LCQ_ERR_FILE_NOT_FOUND;
    case ErrorCode::kSchemaViolation:
      return LCQ_ERR_SCHEMA_VIOLATION;
    default:
      return LCQ_ERR_INTERNAL;
  }
}

nlohmann::json parse_or_throw(const char* text, const char* what) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw lcqft::Error(lcqft::ErrorCode::kParse,
                       std::string("invalid JSON for ") + what);
  return j;
}

lcqft::SuiteOptions to_options(const lcq_options* opt) {
  lcqft::SuiteOptions o;
  if (opt) {
    o.seed = opt->seed;
    o.exact_mode = opt->float_mode == 0;
    if (opt->tolerance > 0) o.tolerance = opt->tolerance;
    if (opt->fd_steps) o.fd_steps = opt->fd_steps;
  }
  return o;
}

lcq_status emit_report(const lcqft::Report& report, char** out_report_json) {
  if (out_report_json) *out_report_json = dup_string(report.to_string());
  if (!report.all_pass()) {
    set_error("one or more checks failed");
    return LCQ_ERR_CHECKS_FAILED;
  }
  return LCQ_OK;
}

template <typename Fn>
lcq_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const lcqft::Error& e) {
    set_error(e.what());
    return status_from(e);
  } catch (const std::exception& e) {
    set_error(e.what());
    return LCQ_ERR_INTERNAL;
  }
}

}  // namespace

struct lcq_spacetime {
  lcqft::SpacetimePtr ptr;
};

extern "C" {

const char* lcq_version(void) { return lcqft::tool_version(); }

const char* lcq_last_error(void) { return tl_error.c_str(); }

void lcq_clear_last_error(void) { tl_error.clear(); }

void lcq_string_free(char* s) { std::free(s); }

lcq_status lcq_spacetime_create(const char* json, lcq_spacetime** out) {
  if (!json || !out) {
    set_error("null pointer argument");
    return LCQ_ERR_NULL_PTR;
  }
  return guarded([&]() -> lcq_status {
    auto m = lcqft::Spacetime::from_json(parse_or_throw(json, "spacetime"));
    *out = new lcq_spacetime{std::move(m)};
    return LCQ_OK;
  });
}

void lcq_spacetime_free(lcq_spacetime* m) { delete m; }

int32_t lcq_spacetime_components(const lcq_spacetime* m) {
  return m ? m->ptr->component_count() : -1;
}

int32_t lcq_spacetime_sites(const lcq_spacetime* m) {
  return m ? m->ptr->site_count() : -1;
}

int32_t lcq_spacetime_causally_leq(const lcq_spacetime* m, int32_t comp,
                                   int32_t t0, int32_t x0, int32_t t1,
                                   int32_t x1) {
  if (!m) return 0;
  try {
    return m->ptr->causally_leq(lcqft::Site{comp, t0, x0},
                                lcqft::Site{comp, t1, x1})
               ? 1
               : 0;
  } catch (const std::exception& e) {
    set_error(e.what());
    return 0;
  }
}

lcq_status lcq_spacetime_to_json(const lcq_spacetime* m, char** out_json) {
  if (!m || !out_json) {
    set_error("null pointer argument");
    return LCQ_ERR_NULL_PTR;
  }
  return guarded([&]() -> lcq_status {
    *out_json = dup_string(m->ptr->to_json().dump(2));
    return LCQ_OK;
  });
}

void lcq_options_init(lcq_options* opt) {
  if (!opt) return;
  opt->seed = 1;
  opt->float_mode = 0;
  opt->tolerance = 1e-10;
  opt->fd_steps = nullptr;
}

lcq_status lcq_run_axioms(const char* spacetime_json, const lcq_options* opt,
                          char** out_report_json) {
  return guarded([&]() -> lcq_status {
    nlohmann::json spec;
    if (spacetime_json) spec = parse_or_throw(spacetime_json, "spacetime");
    lcqft::Report report = lcqft::run_axioms_suite(spec, to_options(opt));
    return emit_report(report, out_report_json);
  });
}

lcq_status lcq_run_rce(const char* spacetime_json, const char* kappa_json,
                       const char* mode, const lcq_options* opt,
                       char** out_report_json) {
  return guarded([&]() -> lcq_status {
    nlohmann::json spec, kappa;
    if (spacetime_json) spec = parse_or_throw(spacetime_json, "spacetime");
    if (kappa_json) kappa = parse_or_throw(kappa_json, "kappa");
    std::string mode_str = mode ? mode : "exact";
    if (mode_str != "exact" && mode_str != "fd") {
      set_error("rce mode must be \"exact\" or \"fd\"");
      return LCQ_ERR_INVALID_ARGUMENT;
    }
    lcqft::Report report =
        lcqft::run_rce_suite(spec, kappa, mode_str, to_options(opt));
    return emit_report(report, out_report_json);
  });
}

lcq_status lcq_run_bv(const char* model_json, int32_t ghost_number,
                      int32_t max_degree, const lcq_options* opt,
                      char** out_report_json) {
  if (!model_json) {
    set_error("null model");
    return LCQ_ERR_NULL_PTR;
  }
  return guarded([&]() -> lcq_status {
    lcqft::Report report =
        lcqft::run_bv_suite(parse_or_throw(model_json, "model"), ghost_number,
                            max_degree, to_options(opt));
    return emit_report(report, out_report_json);
  });
}

lcq_status lcq_run_fields(const char* category_json, const char* candidates_json,
                          const lcq_options* opt, char** out_report_json) {
  return guarded([&]() -> lcq_status {
    nlohmann::json category =
        category_json
            ? parse_or_throw(category_json, "category")
            : nlohmann::json::parse(lcqft::fixtures::default_category());
    nlohmann::json candidates =
        candidates_json
            ? parse_or_throw(candidates_json, "candidates")
            : nlohmann::json::parse(lcqft::fixtures::default_candidates());
    lcqft::Report report =
        lcqft::run_fields_suite(category, candidates, to_options(opt));
    return emit_report(report, out_report_json);
  });
}

lcq_status lcq_run_all(const lcq_options* opt, char** out_report_json) {
  return guarded([&]() -> lcq_status {
    lcqft::Report report = lcqft::run_all(to_options(opt));
    return emit_report(report, out_report_json);
  });
}

lcq_status lcq_list_checks(const char* subcommand, char** out_text) {
  if (!out_text) {
    set_error("null pointer argument");
    return LCQ_ERR_NULL_PTR;
  }
  return guarded([&]() -> lcq_status {
    std::string text;
    for (const auto& name :
         lcqft::list_checks(subcommand ? subcommand : "all"))
      text += name + "\n";
    *out_text = dup_string(text);
    return LCQ_OK;
  });
}

lcq_status lcq_report_schema(char** out_json) {
  if (!out_json) {
    set_error("null pointer argument");
    return LCQ_ERR_NULL_PTR;
  }
  *out_json = dup_string(lcqft::report_schema().dump(2));
  return LCQ_OK;
}

lcq_status lcq_fixture(const char* name, char** out_json) {
  if (!name || !out_json) {
    set_error("null pointer argument");
    return LCQ_ERR_NULL_PTR;
  }
  std::string key = name;
  const char* text = nullptr;
  if (key == "spacetime") text = lcqft::fixtures::default_spacetime();
  if (key == "kappa") text = lcqft::fixtures::default_kappa();
  if (key == "so3_model") text = lcqft::fixtures::so3_model();
  if (key == "abelian_model") text = lcqft::fixtures::abelian_model();
  if (key == "sabotage_model") text = lcqft::fixtures::sabotage_model();
  if (key == "category") text = lcqft::fixtures::default_category();
  if (key == "candidates") text = lcqft::fixtures::default_candidates();
  if (!text) {
    set_error("unknown fixture: " + key);
    return LCQ_ERR_INVALID_ARGUMENT;
  }
  *out_json = dup_string(text);
  return LCQ_OK;
}

}  // extern "C"
