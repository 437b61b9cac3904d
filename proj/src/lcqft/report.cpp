#include "lcqft/report.hpp"

#include <algorithm>

namespace lcqft {

const char* tool_version() { return "0.1.0"; }

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (c.status == "fail") return false;
  return true;
}

void Report::sort_checks() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const CheckResult& a, const CheckResult& b) {
                     return a.name < b.name;
                   });
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = tool;
  j["version"] = version.empty() ? tool_version() : version;
  j["config"] = config;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["status"] = c.status;
    if (!c.witness.empty()) cj["witness"] = c.witness;
    if (!c.lhs.empty()) cj["lhs"] = c.lhs;
    if (!c.rhs.empty()) cj["rhs"] = c.rhs;
    cj["max_abs_error"] = c.max_abs_error;
    cj["wall_time_ms"] = c.wall_time_ms;
    arr.push_back(cj);
  }
  j["checks"] = arr;
  j["all_pass"] = all_pass();
  return j;
}

bool validate_report(const nlohmann::json& j, std::string* why) {
  auto complain = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!j.is_object()) return complain("report must be an object");
  for (const char* key : {"tool", "version", "config", "checks", "all_pass"})
    if (!j.contains(key)) return complain(std::string("missing key: ") + key);
  if (!j.at("tool").is_string() || !j.at("version").is_string())
    return complain("tool/version must be strings");
  if (!j.at("checks").is_array()) return complain("checks must be an array");
  if (!j.at("all_pass").is_boolean()) return complain("all_pass must be a bool");
  for (const auto& c : j.at("checks")) {
    if (!c.is_object()) return complain("check entry must be an object");
    for (const char* key : {"name", "status", "max_abs_error", "wall_time_ms"})
      if (!c.contains(key))
        return complain(std::string("check missing key: ") + key);
    std::string status = c.at("status").get<std::string>();
    if (status != "pass" && status != "fail" && status != "skip")
      return complain("check status must be pass|fail|skip");
    if (!c.at("max_abs_error").is_number())
      return complain("max_abs_error must be a number");
  }
  return true;
}

nlohmann::ordered_json report_schema() {
  nlohmann::ordered_json s;
  s["type"] = "object";
  s["required"] = {"tool", "version", "config", "checks", "all_pass"};
  nlohmann::ordered_json check;
  check["type"] = "object";
  check["required"] = {"name", "status", "max_abs_error", "wall_time_ms"};
  check["properties"] = {{"name", {{"type", "string"}}},
                         {"status", {{"enum", {"pass", "fail", "skip"}}}},
                         {"witness", {{"type", "string"}}},
                         {"lhs", {{"type", "string"}}},
                         {"rhs", {{"type", "string"}}},
                         {"max_abs_error", {{"type", "number"}}},
                         {"wall_time_ms", {{"type", "number"}}}};
  s["properties"] = {{"tool", {{"type", "string"}}},
                     {"version", {{"type", "string"}}},
                     {"config", {{"type", "object"}}},
                     {"checks", {{"type", "array"}, {"items", check}}},
                     {"all_pass", {{"type", "boolean"}}}};
  return s;
}

nlohmann::ordered_json strip_timing(nlohmann::ordered_json report) {
  if (report.contains("checks"))
    for (auto& c : report["checks"]) c["wall_time_ms"] = 0.0;
  return report;
}

}  // namespace lcqft
