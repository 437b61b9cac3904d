#include <doctest.h>

#include "lcqft/fixtures.hpp"
#include "lcqft/report.hpp"
#include "lcqft/suites.hpp"

using namespace lcqft;

TEST_CASE("report serialization validates against the schema") {
  SuiteOptions opt;
  opt.seed = 5;
  opt.axioms_spacetimes = 4;
  opt.axioms_embeddings = 8;
  opt.tensor_instances = 2;
  Report r = run_axioms_suite(nlohmann::json(), opt);
  auto j = r.to_json();
  std::string why;
  CHECK(validate_report(j, &why));
  CHECK(why.empty());
  CHECK(j.at("tool") == "lcqft");
  CHECK(j.at("all_pass").get<bool>());
}

TEST_CASE("schema validation rejects malformed reports") {
  nlohmann::json bad = {{"tool", "lcqft"}};
  std::string why;
  CHECK(!validate_report(bad, &why));
  CHECK(!why.empty());

  nlohmann::json wrong_status = {
      {"tool", "lcqft"}, {"version", "x"}, {"config", nlohmann::json::object()},
      {"checks",
       nlohmann::json::array({{{"name", "a"},
                               {"status", "maybe"},
                               {"max_abs_error", 0.0},
                               {"wall_time_ms", 0.0}}})},
      {"all_pass", true}};
  CHECK(!validate_report(wrong_status, &why));
}

TEST_CASE("identical seeds give byte-identical reports modulo timing") {
  SuiteOptions opt;
  opt.seed = 77;
  opt.germ_instances = 3;
  opt.rce_instances = 3;
  nlohmann::json spec = nlohmann::json::parse(fixtures::default_spacetime());
  nlohmann::json kappa = nlohmann::json::parse(fixtures::default_kappa());
  Report a = run_rce_suite(spec, kappa, "exact", opt);
  Report b = run_rce_suite(spec, kappa, "exact", opt);
  CHECK(strip_timing(a.to_json()).dump() == strip_timing(b.to_json()).dump());

  SuiteOptions other = opt;
  other.seed = 78;
  Report c = run_rce_suite(spec, kappa, "exact", other);
  // Different seed changes the config echo at minimum.
  CHECK(strip_timing(a.to_json()).dump() != strip_timing(c.to_json()).dump());
}

TEST_CASE("check listing covers every suite") {
  for (const std::string& sub : {"axioms", "rce", "bv", "fields"}) {
    auto names = list_checks(sub);
    CHECK(!names.empty());
    for (const auto& n : names) CHECK(n.rfind(sub + ".", 0) == 0);
  }
  auto all = list_checks("all");
  CHECK(all.size() >= 40);
}

TEST_CASE("bundled fixtures parse and the sabotage model is detected") {
  for (const char* text :
       {fixtures::default_spacetime(), fixtures::default_kappa(),
        fixtures::so3_model(), fixtures::abelian_model(),
        fixtures::sabotage_model(), fixtures::default_category(),
        fixtures::default_candidates()}) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    CHECK(!j.is_discarded());
  }
  SuiteOptions opt;
  opt.seed = 9;
  opt.bv_random_elements = 20;
  Report r = run_bv_suite(nlohmann::json::parse(fixtures::sabotage_model()), 0,
                          2, opt);
  CHECK(!r.all_pass());
  bool saw_violation = false;
  for (const auto& c : r.checks)
    if (c.status == "fail" && c.name == "bv.model_invariants") saw_violation = true;
  CHECK(saw_violation);
}
