#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcqft/report.hpp"

namespace lcqft {

struct SuiteOptions {
  uint64_t seed = 1;
  bool exact_mode = true;       // false: float kernels at `tolerance`
  double tolerance = 1e-10;
  std::string fd_steps = "1/64,1/128";
  // Instance counts; the defaults meet the acceptance requirements.
  int axioms_spacetimes = 25;
  int axioms_embeddings = 100;
  int tensor_instances = 10;
  int germ_instances = 10;
  int rce_instances = 10;
  int bv_random_elements = 200;
};

// Axiom suite over seeded random spacetimes and embeddings. `spec` may be a
// spacetime JSON used as an extra pinned instance, or null.
Report run_axioms_suite(const nlohmann::json& spec, const SuiteOptions& opt);

// Cauchy-surface algebra and relative Cauchy evolution suite over the given
// base spacetime and perturbation (JSON), plus seeded instances.
Report run_rce_suite(const nlohmann::json& spec, const nlohmann::json& kappa,
                     const std::string& mode, const SuiteOptions& opt);

Report run_bv_suite(const nlohmann::json& model, int ghost_number,
                    int max_degree, const SuiteOptions& opt);

Report run_fields_suite(const nlohmann::json& category,
                        const nlohmann::json& candidates,
                        const SuiteOptions& opt);

// All suites against the bundled fixtures, check names prefixed.
Report run_all(const SuiteOptions& opt);

std::vector<std::string> list_checks(const std::string& subcommand);

}  // namespace lcqft
