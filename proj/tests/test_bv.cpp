#include <doctest.h>

#include "lcqft/bv.hpp"
#include "lcqft/rng.hpp"

using namespace lcqft;

namespace {

GaugeModelPtr so3_model() {
  nlohmann::json j = {
      {"name", "so3_on_r3"},
      {"config_dim", 3},
      {"gauge_dim", 3},
      // f^c_{ab} = epsilon_{abc} (0-indexed triples).
      {"structure_constants",
       nlohmann::json::array({{2, 0, 1, 1}, {2, 1, 0, -1}, {0, 1, 2, 1},
                              {0, 2, 1, -1}, {1, 2, 0, 1}, {1, 0, 2, -1}})},
      // (L_a)_{ij} = -epsilon_{aij}: rotation generators.
      // (T_a)_{ij} = epsilon_{aij}; the vector-field bracket then matches
      // [rho_a, rho_b] = epsilon_{abc} rho_c.
      {"rho_matrices",
       nlohmann::json::array({
           nlohmann::json::array({{0, 0, 0}, {0, 0, 1}, {0, -1, 0}}),
           nlohmann::json::array({{0, 0, -1}, {0, 0, 0}, {1, 0, 0}}),
           nlohmann::json::array({{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}),
       })},
      // S = 1/4 (|x|^2 - 1)^2.
      {"action",
       nlohmann::json::array({
           nlohmann::json::array({"1/4", {4, 0, 0}}),
           nlohmann::json::array({"1/4", {0, 4, 0}}),
           nlohmann::json::array({"1/4", {0, 0, 4}}),
           nlohmann::json::array({"1/2", {2, 2, 0}}),
           nlohmann::json::array({"1/2", {2, 0, 2}}),
           nlohmann::json::array({"1/2", {0, 2, 2}}),
           nlohmann::json::array({"-1/2", {2, 0, 0}}),
           nlohmann::json::array({"-1/2", {0, 2, 0}}),
           nlohmann::json::array({"-1/2", {0, 0, 2}}),
           nlohmann::json::array({"1/4", {0, 0, 0}}),
       })},
  };
  return GaugeModel::from_json(j);
}

GaugeModelPtr abelian_model() {
  nlohmann::json j = {
      {"name", "abelian_torus_rotations"},
      {"config_dim", 4},
      {"gauge_dim", 2},
      {"rho_matrices",
       nlohmann::json::array({
           nlohmann::json::array({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 0},
                                  {0, 0, 0, 0}}),
           nlohmann::json::array({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, -1},
                                  {0, 0, 1, 0}}),
       })},
      // S = 1/4 (x1^2+x2^2-1)^2 + 1/4 (x3^2+x4^2-1)^2.
      {"action",
       nlohmann::json::array({
           nlohmann::json::array({"1/4", {4, 0, 0, 0}}),
           nlohmann::json::array({"1/2", {2, 2, 0, 0}}),
           nlohmann::json::array({"1/4", {0, 4, 0, 0}}),
           nlohmann::json::array({"-1/2", {2, 0, 0, 0}}),
           nlohmann::json::array({"-1/2", {0, 2, 0, 0}}),
           nlohmann::json::array({"1/4", {0, 0, 4, 0}}),
           nlohmann::json::array({"1/2", {0, 0, 2, 2}}),
           nlohmann::json::array({"1/4", {0, 0, 0, 4}}),
           nlohmann::json::array({"-1/2", {0, 0, 2, 0}}),
           nlohmann::json::array({"-1/2", {0, 0, 0, 2}}),
           nlohmann::json::array({"1/2", {0, 0, 0, 0}}),
       })},
  };
  return GaugeModel::from_json(j);
}

GaugeModelPtr sabotage_model() {
  // so(3) action content but a non-invariant action S = x1.
  nlohmann::json j = {
      {"name", "sabotage_noninvariant"},
      {"config_dim", 3},
      {"gauge_dim", 3},
      {"structure_constants",
       nlohmann::json::array({{2, 0, 1, 1}, {2, 1, 0, -1}, {0, 1, 2, 1},
                              {0, 2, 1, -1}, {1, 2, 0, 1}, {1, 0, 2, -1}})},
      // (T_a)_{ij} = epsilon_{aij}; the vector-field bracket then matches
      // [rho_a, rho_b] = epsilon_{abc} rho_c.
      {"rho_matrices",
       nlohmann::json::array({
           nlohmann::json::array({{0, 0, 0}, {0, 0, 1}, {0, -1, 0}}),
           nlohmann::json::array({{0, 0, -1}, {0, 0, 0}, {1, 0, 0}}),
           nlohmann::json::array({{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}),
       })},
      {"action", nlohmann::json::array({nlohmann::json::array({1, {1, 0, 0}})})},
  };
  return GaugeModel::from_json(j);
}

GradedElement random_element(Rng& rng, const GaugeModelPtr& model, int max_deg) {
  auto monos = enumerate_monomials(*model, /*any*/ 0, max_deg);
  // Mix several ghost numbers.
  GradedElement e(model);
  for (int g = -2; g <= 2; ++g) {
    auto ms = enumerate_monomials(*model, g, max_deg);
    for (int pick = 0; pick < 3 && !ms.empty(); ++pick)
      e.add_term(ms[rng.below(ms.size())], rng.small_rational());
  }
  (void)monos;
  return e;
}

}  // namespace

TEST_CASE("model validation holds for the shipped models") {
  auto so3 = so3_model();
  CHECK(so3->check_antisymmetry().empty());
  CHECK(so3->check_jacobi().empty());
  CHECK(so3->check_morphism().empty());
  CHECK(so3->check_invariance().empty());

  auto ab = abelian_model();
  CHECK(ab->first_violation().empty());

  auto bad = sabotage_model();
  CHECK(!bad->check_invariance().empty());
}

TEST_CASE("graded product signs") {
  auto m = so3_model();
  auto c1 = GradedElement::ghost(m, 0);
  auto c2 = GradedElement::ghost(m, 1);
  auto b1 = GradedElement::ghost_antifield(m, 0);
  auto b2 = GradedElement::ghost_antifield(m, 1);
  auto a1 = GradedElement::antifield(m, 0);

  CHECK(graded_multiply(c1, c1).is_zero());
  CHECK(graded_multiply(c1, c2) ==
        graded_multiply(c2, c1).scaled(Rational(-1)));
  CHECK(graded_multiply(b1, b2) == graded_multiply(b2, b1));
  CHECK(graded_multiply(a1, c1) ==
        graded_multiply(c1, a1).scaled(Rational(-1)));

  // Associativity spot check on mixed parities.
  auto x = GradedElement::coordinate(m, 2);
  auto u = graded_multiply(graded_multiply(c1, a1), x);
  auto v = graded_multiply(c1, graded_multiply(a1, x));
  CHECK(u == v);
}

TEST_CASE("differential rules on the so(3) model") {
  auto m = so3_model();

  // gamma c^1 = -c^2 c^3.
  auto gc1 = apply_gamma(GradedElement::ghost(m, 0));
  auto expected =
      graded_multiply(GradedElement::ghost(m, 1), GradedElement::ghost(m, 2))
          .scaled(Rational(-1));
  CHECK(gc1 == expected);

  // gamma x_i = sum_a c^a (L_a x)_i.
  auto gx1 = apply_gamma(GradedElement::coordinate(m, 0));
  GradedElement want(m);
  // (T_2 x)_1 = -x_3, (T_3 x)_1 = x_2.
  want = want - graded_multiply(GradedElement::ghost(m, 1),
                                GradedElement::coordinate(m, 2));
  want = want + graded_multiply(GradedElement::ghost(m, 2),
                                GradedElement::coordinate(m, 1));
  CHECK(gx1 == want);

  // delta x'_1 = dS/dx_1 = (|x|^2 - 1) x_1.
  auto dx1 = apply_delta(GradedElement::antifield(m, 0));
  Poly x1 = Poly::variable(3, 0), x2 = Poly::variable(3, 1),
       x3 = Poly::variable(3, 2);
  Poly norm = x1 * x1 + x2 * x2 + x3 * x3 - Poly::constant(3, Rational(1));
  CHECK(dx1 == GradedElement::from_poly(m, norm * x1));

  // delta b_1 = sum_i (T_1 x)_i x'_i = x_3 x'_2 - x_2 x'_3.
  auto db1 = apply_delta(GradedElement::ghost_antifield(m, 0));
  GradedElement want_b(m);
  want_b = want_b + graded_multiply(GradedElement::from_poly(m, x3),
                                    GradedElement::antifield(m, 1));
  want_b = want_b - graded_multiply(GradedElement::from_poly(m, x2),
                                    GradedElement::antifield(m, 2));
  CHECK(db1 == want_b);

  // delta x_i = 0 and delta c = 0.
  CHECK(apply_delta(GradedElement::coordinate(m, 1)).is_zero());
  CHECK(apply_delta(GradedElement::ghost(m, 2)).is_zero());
}

TEST_CASE("abelian model: gamma vanishes on ghosts") {
  auto m = abelian_model();
  CHECK(apply_gamma(GradedElement::ghost(m, 0)).is_zero());
  CHECK(apply_gamma(GradedElement::ghost(m, 1)).is_zero());
}

TEST_CASE("differentials square to zero exactly on random elements") {
  Rng rng(211);
  for (auto model : {so3_model(), abelian_model()}) {
    for (int trial = 0; trial < 25; ++trial) {
      GradedElement u = random_element(rng, model, 3);
      CHECK(apply_delta(apply_delta(u)).is_zero());
      CHECK(apply_gamma(apply_gamma(u)).is_zero());
      CHECK((apply_delta(apply_gamma(u)) + apply_gamma(apply_delta(u))).is_zero());
      CHECK(apply_s(apply_s(u)).is_zero());
    }
  }
}

TEST_CASE("ghost number bookkeeping: s raises by exactly one") {
  Rng rng(223);
  auto model = so3_model();
  for (int g = -3; g <= 2; ++g) {
    auto monos = enumerate_monomials(*model, g, 2);
    for (int pick = 0; pick < 4 && !monos.empty(); ++pick) {
      GradedElement u(model);
      u.add_term(monos[rng.below(monos.size())], rng.small_rational());
      GradedElement su = apply_s(u);
      int got = 0;
      CHECK(su.homogeneous(&got));
      if (!su.is_zero()) CHECK(got == g + 1);
    }
  }
}

TEST_CASE("graded Leibniz rule for s") {
  Rng rng(227);
  auto model = so3_model();
  for (int trial = 0; trial < 10; ++trial) {
    // Parity-homogeneous left factor.
    auto monos = enumerate_monomials(*model, trial % 2 == 0 ? 0 : -1, 2);
    GradedElement u(model);
    int par = -1;
    for (int pick = 0; pick < 6 && !monos.empty(); ++pick) {
      const auto& mono = monos[rng.below(monos.size())];
      if (par < 0) par = mono.parity();
      if (mono.parity() != par) continue;
      u.add_term(mono, rng.small_rational());
    }
    GradedElement v = random_element(rng, model, 2);
    if (u.is_zero()) continue;
    GradedElement lhs = apply_s(graded_multiply(u, v));
    GradedElement rhs = graded_multiply(apply_s(u), v) +
                        graded_multiply(u, apply_s(v))
                            .scaled(par % 2 == 0 ? Rational(1) : Rational(-1));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("sabotage model is detected through s^2") {
  auto bad = sabotage_model();
  bool detected = false;
  for (int a = 0; a < bad->gauge_dim; ++a) {
    GradedElement ba = GradedElement::ghost_antifield(bad, a);
    if (!apply_s(apply_s(ba)).is_zero()) detected = true;
  }
  CHECK(detected);
  CHECK(!bad->first_violation().empty());
}

TEST_CASE("H^0 of the so(3) quartic model matches the invariant oracle") {
  auto model = so3_model();
  int oracle = invariant_oracle_dimension(*model, 2);
  CHECK(oracle == 2);  // 1 and |x|^2
  CohomologyResult h0 = cohomology(model, 0, 2);
  CHECK(h0.dimension == oracle);
}

TEST_CASE("trivial gauge algebra, S = 0: nothing is exact") {
  nlohmann::json j = {
      {"name", "free_point"},
      {"config_dim", 2},
      {"gauge_dim", 0},
      {"rho_matrices", nlohmann::json::array()},
      {"action", nlohmann::json::array()},
  };
  auto model = GaugeModel::from_json(j);
  CohomologyResult h0 = cohomology(model, 0, 1);
  CHECK(h0.dimension == 3);  // 1, x1, x2
}

TEST_CASE("sectors above the maximal ghost number are empty") {
  // Ghost number is bounded above by the gauge dimension (only ghosts raise
  // it), so any k > gauge_dim has an empty sector.
  auto model = so3_model();
  CohomologyResult h = cohomology(model, 5, 1);
  CHECK(h.kernel_dimension == 0);
  CHECK(h.dimension == 0);
}

TEST_CASE("cohomology is invariant under gauge basis relabeling") {
  // Swap generators 0 and 1 of so(3); structure constants pick up the
  // permutation signs.
  nlohmann::json j = {
      {"name", "so3_relabelled"},
      {"config_dim", 3},
      {"gauge_dim", 3},
      {"structure_constants",
       nlohmann::json::array({{2, 1, 0, 1}, {2, 0, 1, -1}, {1, 0, 2, 1},
                              {1, 2, 0, -1}, {0, 2, 1, 1}, {0, 1, 2, -1}})},
      {"rho_matrices",
       nlohmann::json::array({
           nlohmann::json::array({{0, 0, -1}, {0, 0, 0}, {1, 0, 0}}),
           nlohmann::json::array({{0, 0, 0}, {0, 0, 1}, {0, -1, 0}}),
           nlohmann::json::array({{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}),
       })},
      {"action",
       nlohmann::json::array({
           nlohmann::json::array({"1/4", {4, 0, 0}}),
           nlohmann::json::array({"1/4", {0, 4, 0}}),
           nlohmann::json::array({"1/4", {0, 0, 4}}),
           nlohmann::json::array({"1/2", {2, 2, 0}}),
           nlohmann::json::array({"1/2", {2, 0, 2}}),
           nlohmann::json::array({"1/2", {0, 2, 2}}),
           nlohmann::json::array({"-1/2", {2, 0, 0}}),
           nlohmann::json::array({"-1/2", {0, 2, 0}}),
           nlohmann::json::array({"-1/2", {0, 0, 2}}),
           nlohmann::json::array({"1/4", {0, 0, 0}}),
       })},
  };
  auto relabelled = GaugeModel::from_json(j);
  CHECK(relabelled->first_violation().empty());
  CHECK(cohomology(relabelled, 0, 2).dimension ==
        cohomology(so3_model(), 0, 2).dimension);
}
