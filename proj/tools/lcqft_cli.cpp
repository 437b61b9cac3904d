// Command-line front end for the lcqft shared library. Talks to the core
// exclusively through the C API in lcqft/lcqft.h.

#include <lcqft/lcqft.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

namespace {

std::optional<std::string> read_file(const std::string& path, std::string* err) {
  std::ifstream in(path);
  if (!in) {
    *err = "cannot open file: " + path;
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_report(const std::string& path, const char* report) {
  if (!report) return false;
  if (path.empty() || path == "-") {
    std::cout << report;
    return true;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write report to " << path << "\n";
    return false;
  }
  out << report;
  return true;
}

struct Common {
  uint64_t seed = 1;
  std::string mode = "exact";
  double tolerance = 1e-10;
  std::string report_path;
  bool list_only = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_mode = true) {
  cmd->add_option("--seed", c.seed, "instance generator seed");
  if (with_mode)
    cmd->add_option("--mode", c.mode,
                    "exact|float arithmetic for numeric kernels")
        ->check(CLI::IsMember({"exact", "float"}));
  cmd->add_option("--tolerance", c.tolerance, "float-mode tolerance");
  cmd->add_option("--report", c.report_path, "report path ('-' for stdout)");
  cmd->add_flag("--list-checks", c.list_only, "list the suite's checks and exit");
}

lcq_options make_options(const Common& c, const std::string& fd_steps) {
  lcq_options opt;
  lcq_options_init(&opt);
  opt.seed = c.seed;
  opt.float_mode = c.mode == "float" ? 1 : 0;
  opt.tolerance = c.tolerance;
  static std::string steps_storage;
  steps_storage = fd_steps;
  if (!steps_storage.empty()) opt.fd_steps = steps_storage.c_str();
  return opt;
}

int finish(lcq_status status, char* report, const std::string& report_path) {
  bool wrote = write_report(report_path, report);
  lcq_string_free(report);
  if (status == LCQ_OK) return 0;
  if (status == LCQ_ERR_CHECKS_FAILED) {
    std::cerr << "lcqft: checks failed (see report)\n";
    return 1;
  }
  std::cerr << "lcqft: " << lcq_last_error() << "\n";
  (void)wrote;
  return 2;
}

int list_checks(const char* subcommand) {
  char* text = nullptr;
  if (lcq_list_checks(subcommand, &text) != LCQ_OK) {
    std::cerr << "lcqft: " << lcq_last_error() << "\n";
    return 2;
  }
  std::cout << text;
  lcq_string_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lcqft: exact verification suites for a lattice model of "
               "locally covariant field theory"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::string(lcq_version()));

  // axioms
  Common ax;
  std::string ax_spec;
  auto* axioms = app.add_subcommand(
      "axioms", "functor axioms, locality, timeslice, tensor structure");
  add_common(axioms, ax);
  axioms->add_option("--spec", ax_spec, "spacetime JSON file (extra instance)");

  // rce
  Common rc;
  std::string rce_spec, rce_kappa, rce_mode = "exact", rce_fd_steps = "1/64,1/128";
  auto* rce = app.add_subcommand(
      "rce", "Cauchy-surface germs, propagation, relative Cauchy evolution");
  add_common(rce, rc, /*with_mode=*/false);
  rce->add_option("--spec", rce_spec, "base spacetime JSON file");
  rce->add_option("--kappa", rce_kappa, "perturbation JSON file");
  rce->add_option("--mode", rce_mode,
                  "exact: linear-response derivative; fd: finite differences")
      ->check(CLI::IsMember({"exact", "fd"}));
  rce->add_option("--fd-steps", rce_fd_steps, "comma-separated rational steps");

  // bv
  Common bv;
  std::string bv_model;
  int ghost_number = 0, max_degree = 2;
  auto* bvc = app.add_subcommand("bv", "graded differentials and cohomology");
  add_common(bvc, bv);
  bvc->add_option("--model", bv_model, "gauge model JSON file");
  bvc->add_option("--ghost-number", ghost_number, "cohomology degree");
  bvc->add_option("--max-degree", max_degree, "polynomial degree window");

  // fields
  Common fl;
  std::string fl_category, fl_candidates;
  auto* fields = app.add_subcommand(
      "fields", "natural transformations: naturality, product, differential");
  add_common(fields, fl);
  fields->add_option("--category", fl_category, "category JSON file");
  fields->add_option("--candidates", fl_candidates, "candidate fields JSON file");

  // all
  Common al;
  auto* all = app.add_subcommand("all", "every suite on the bundled fixtures");
  add_common(all, al);

  // fixtures
  std::string fixture_name;
  auto* fixture = app.add_subcommand("fixture", "print a bundled fixture JSON");
  fixture->add_option("name", fixture_name,
                      "spacetime|kappa|so3_model|abelian_model|sabotage_model|"
                      "category|candidates")
      ->required();

  // schema
  auto* schema = app.add_subcommand("schema", "print the report JSON schema");

  CLI11_PARSE(app, argc, argv);

  auto load_optional = [&](const std::string& path,
                           std::optional<std::string>& out) -> bool {
    if (path.empty()) return true;
    std::string err;
    auto text = read_file(path, &err);
    if (!text) {
      std::cerr << "lcqft: " << err << "\n";
      return false;
    }
    out = *text;
    return true;
  };

  if (axioms->parsed()) {
    if (ax.list_only) return list_checks("axioms");
    std::optional<std::string> spec;
    if (!load_optional(ax_spec, spec)) return 2;
    lcq_options opt = make_options(ax, "");
    char* report = nullptr;
    lcq_status st =
        lcq_run_axioms(spec ? spec->c_str() : nullptr, &opt, &report);
    return finish(st, report, ax.report_path);
  }
  if (rce->parsed()) {
    if (rc.list_only) return list_checks("rce");
    std::optional<std::string> spec, kappa;
    if (!load_optional(rce_spec, spec)) return 2;
    if (!load_optional(rce_kappa, kappa)) return 2;
    lcq_options opt = make_options(rc, rce_fd_steps);
    char* report = nullptr;
    lcq_status st = lcq_run_rce(spec ? spec->c_str() : nullptr,
                                kappa ? kappa->c_str() : nullptr,
                                rce_mode.c_str(), &opt, &report);
    return finish(st, report, rc.report_path);
  }
  if (bvc->parsed()) {
    if (bv.list_only) return list_checks("bv");
    std::optional<std::string> model;
    if (!load_optional(bv_model, model)) return 2;
    std::string model_text;
    if (model) {
      model_text = *model;
    } else {
      char* fixture_text = nullptr;
      lcq_fixture("so3_model", &fixture_text);
      model_text = fixture_text;
      lcq_string_free(fixture_text);
    }
    lcq_options opt = make_options(bv, "");
    char* report = nullptr;
    lcq_status st =
        lcq_run_bv(model_text.c_str(), ghost_number, max_degree, &opt, &report);
    return finish(st, report, bv.report_path);
  }
  if (fields->parsed()) {
    if (fl.list_only) return list_checks("fields");
    std::optional<std::string> category, candidates;
    if (!load_optional(fl_category, category)) return 2;
    if (!load_optional(fl_candidates, candidates)) return 2;
    lcq_options opt = make_options(fl, "");
    char* report = nullptr;
    lcq_status st = lcq_run_fields(category ? category->c_str() : nullptr,
                                   candidates ? candidates->c_str() : nullptr,
                                   &opt, &report);
    return finish(st, report, fl.report_path);
  }
  if (all->parsed()) {
    if (al.list_only) return list_checks("all");
    lcq_options opt = make_options(al, "");
    char* report = nullptr;
    lcq_status st = lcq_run_all(&opt, &report);
    return finish(st, report, al.report_path);
  }
  if (fixture->parsed()) {
    char* text = nullptr;
    if (lcq_fixture(fixture_name.c_str(), &text) != LCQ_OK) {
      std::cerr << "lcqft: " << lcq_last_error() << "\n";
      return 2;
    }
    std::cout << text;
    lcq_string_free(text);
    return 0;
  }
  if (schema->parsed()) {
    char* text = nullptr;
    lcq_report_schema(&text);
    std::cout << text << "\n";
    lcq_string_free(text);
    return 0;
  }
  std::cout << app.help();
  return 0;
}
