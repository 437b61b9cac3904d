#include <doctest.h>

#include <lcqft/lcqft.h>

#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

namespace {

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out = s;
  lcq_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and error text") {
  CHECK(std::strlen(lcq_version()) > 0);
  lcq_clear_last_error();
  CHECK(std::string(lcq_last_error()).empty());
}

TEST_CASE("spacetime handle lifecycle") {
  lcq_spacetime* m = nullptr;
  REQUIRE(lcq_spacetime_create(R"({"n_t":5,"n_x":4,"coupling":"1/2"})", &m) ==
          LCQ_OK);
  CHECK(lcq_spacetime_components(m) == 1);
  CHECK(lcq_spacetime_sites(m) == 20);
  CHECK(lcq_spacetime_causally_leq(m, 0, 0, 0, 1, 1) == 1);
  CHECK(lcq_spacetime_causally_leq(m, 0, 0, 0, 1, 2) == 0);
  char* json = nullptr;
  REQUIRE(lcq_spacetime_to_json(m, &json) == LCQ_OK);
  auto round = nlohmann::json::parse(take(json));
  CHECK(round.at("components").size() == 1);
  lcq_spacetime_free(m);

  lcq_spacetime* bad = nullptr;
  CHECK(lcq_spacetime_create("{\"n_t\": 1, \"n_x\": 3}", &bad) ==
        LCQ_ERR_INVALID_ARGUMENT);
  CHECK(!std::string(lcq_last_error()).empty());
  CHECK(lcq_spacetime_create("not json", &bad) == LCQ_ERR_PARSE);
  CHECK(lcq_spacetime_create(nullptr, &bad) == LCQ_ERR_NULL_PTR);
}

TEST_CASE("suite runners produce valid reports through the C surface") {
  lcq_options opt;
  lcq_options_init(&opt);
  opt.seed = 11;

  char* report = nullptr;
  REQUIRE(lcq_run_bv(nullptr, 0, 2, &opt, &report) == LCQ_ERR_NULL_PTR);

  char* model = nullptr;
  REQUIRE(lcq_fixture("so3_model", &model) == LCQ_OK);
  std::string model_text = take(model);
  REQUIRE(lcq_run_bv(model_text.c_str(), 0, 2, &opt, &report) == LCQ_OK);
  auto j = nlohmann::json::parse(take(report));
  CHECK(j.at("all_pass").get<bool>());

  // The sabotage fixture yields LCQ_ERR_CHECKS_FAILED plus a report.
  char* sab = nullptr;
  REQUIRE(lcq_fixture("sabotage_model", &sab) == LCQ_OK);
  std::string sab_text = take(sab);
  char* sab_report = nullptr;
  CHECK(lcq_run_bv(sab_text.c_str(), 0, 1, &opt, &sab_report) ==
        LCQ_ERR_CHECKS_FAILED);
  auto sj = nlohmann::json::parse(take(sab_report));
  CHECK(!sj.at("all_pass").get<bool>());
}

TEST_CASE("rce runner accepts the bundled instance") {
  lcq_options opt;
  lcq_options_init(&opt);
  opt.seed = 11;
  char *spec = nullptr, *kappa = nullptr, *report = nullptr;
  REQUIRE(lcq_fixture("spacetime", &spec) == LCQ_OK);
  REQUIRE(lcq_fixture("kappa", &kappa) == LCQ_OK);
  std::string spec_s = take(spec), kappa_s = take(kappa);
  REQUIRE(lcq_run_rce(spec_s.c_str(), kappa_s.c_str(), "exact", &opt,
                      &report) == LCQ_OK);
  auto j = nlohmann::json::parse(take(report));
  CHECK(j.at("all_pass").get<bool>());
  CHECK(lcq_run_rce(spec_s.c_str(), kappa_s.c_str(), "sideways", &opt,
                    &report) == LCQ_ERR_INVALID_ARGUMENT);
}

TEST_CASE("check listing and schema through the C surface") {
  char* text = nullptr;
  REQUIRE(lcq_list_checks("axioms", &text) == LCQ_OK);
  std::string names = take(text);
  CHECK(names.find("axioms.locality_spacelike_pairings") != std::string::npos);

  char* schema = nullptr;
  REQUIRE(lcq_report_schema(&schema) == LCQ_OK);
  auto sj = nlohmann::json::parse(take(schema));
  CHECK(sj.at("type") == "object");

  CHECK(lcq_fixture("nonsense", &text) == LCQ_ERR_INVALID_ARGUMENT);
}
