#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lcqft {

struct CheckResult {
  std::string name;
  std::string status;  // "pass" | "fail" | "skip"
  std::string witness;
  std::string lhs;
  std::string rhs;
  double max_abs_error = 0.0;
  double wall_time_ms = 0.0;

  static CheckResult pass(std::string check_name) {
    CheckResult r;
    r.name = std::move(check_name);
    r.status = "pass";
    return r;
  }
  static CheckResult fail(std::string check_name, std::string witness_text) {
    CheckResult r;
    r.name = std::move(check_name);
    r.status = "fail";
    r.witness = std::move(witness_text);
    return r;
  }
};

struct Report {
  std::string tool = "lcqft";
  std::string version;
  nlohmann::ordered_json config;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  void sort_checks();
  nlohmann::ordered_json to_json() const;
  std::string to_string() const { return to_json().dump(2) + "\n"; }
};

const char* tool_version();

// Structural validation of an emitted report against the bundled schema.
bool validate_report(const nlohmann::json& j, std::string* why = nullptr);

// The machine-readable schema description shipped with the tool.
nlohmann::ordered_json report_schema();

// Timing fields zeroed, for byte-comparisons between runs.
nlohmann::ordered_json strip_timing(nlohmann::ordered_json report);

}  // namespace lcqft
