#include <doctest.h>

#include "lcqft/nat_fields.hpp"
#include "lcqft/rng.hpp"

using namespace lcqft;

namespace {

SpacetimePtr uniform(int n_t, int n_x, Rational c = rat(1), Rational m = rat(0)) {
  Component comp;
  comp.n_t = n_t;
  comp.n_x = n_x;
  comp.coupling.assign(n_t * n_x, c);
  comp.mass_sq.assign(n_t * n_x, m);
  return Spacetime::create({comp});
}

FieldCategoryPtr small_category() {
  return FieldCategory::make({uniform(4, 3, rat(1, 2), rat(1, 3))}, {1},
                             {{0, 0}});
}

nlohmann::json linear_json() {
  return {{"name", "linear_field"},
          {"arity", 1},
          {"ghost_number", 0},
          {"terms", nlohmann::json::array(
                        {{{"coeff", 1},
                          {"factors", nlohmann::json::array(
                                          {{{"type", "phi_slot"}, {"slot", 0}}})}}})}};
}

nlohmann::json unit_json() {
  return {{"name", "unit_field"},
          {"arity", 1},
          {"ghost_number", 0},
          {"terms", nlohmann::json::array(
                        {{{"coeff", 1},
                          {"factors", nlohmann::json::array(
                                          {{{"type", "sum_slot"}, {"slot", 0}}})}}})}};
}

nlohmann::json density_json() {
  return {{"name", "pointwise_density"},
          {"arity", 1},
          {"ghost_number", 0},
          {"terms",
           nlohmann::json::array(
               {{{"coeff", 1},
                 {"factors", nlohmann::json::array({{{"type", "site_density"},
                                                     {"slot", 0},
                                                     {"power", 2}}})}}})}};
}

nlohmann::json covariant_density_json() {
  // Symmetrized quadratic field: the Eq-product square of the linear field.
  return {{"name", "covariant_density"},
          {"arity", 2},
          {"ghost_number", 0},
          {"terms",
           nlohmann::json::array(
               {{{"coeff", "1/2"},
                 {"factors",
                  nlohmann::json::array({{{"type", "phi_slot"}, {"slot", 0}},
                                         {{"type", "phi_slot"}, {"slot", 1}}})}},
                {{"coeff", "1/2"},
                 {"factors",
                  nlohmann::json::array({{{"type", "phi_slot"}, {"slot", 1}},
                                         {{"type", "phi_slot"}, {"slot", 0}}})}}})}};
}

nlohmann::json fixed_site_json() {
  return {{"name", "fixed_site"},
          {"arity", 1},
          {"ghost_number", 0},
          {"terms",
           nlohmann::json::array(
               {{{"coeff", 1},
                 {"factors", nlohmann::json::array({{{"type", "fixed_site"},
                                                     {"slot", 0},
                                                     {"t", 1},
                                                     {"x", 0}}})}}})}};
}

nlohmann::json antifield_json() {
  return {{"name", "antifield_field"},
          {"arity", 1},
          {"ghost_number", -1},
          {"terms",
           nlohmann::json::array(
               {{{"coeff", 1},
                 {"factors", nlohmann::json::array({{{"type", "antifield_slot"},
                                                     {"slot", 0}}})}}})}};
}

bool fields_equal(const NatField& a, const NatField& b) {
  REQUIRE(a.arity == b.arity);
  const auto& cat = *a.category;
  for (int obj = 0; obj < cat.object_count(); ++obj) {
    const auto& m = cat.object(obj).spacetime;
    int n = m->site_count();
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur(a.arity, 0);
    while (true) {
      tuples.push_back(cur);
      int i = a.arity - 1;
      while (i >= 0 && ++cur[i] == n) cur[i--] = 0;
      if (i < 0) break;
    }
    for (const auto& tuple : tuples) {
      std::vector<TestFunction> fs;
      for (int s : tuple) fs.push_back(delta_function(m, m->site_at(s)));
      if (!(a.evaluate(obj, fs) == b.evaluate(obj, fs))) return false;
    }
  }
  return true;
}

bool field_is_zero(const NatField& a) {
  const auto& cat = *a.category;
  for (int obj = 0; obj < cat.object_count(); ++obj) {
    const auto& m = cat.object(obj).spacetime;
    int n = m->site_count();
    std::vector<int> cur(a.arity, 0);
    while (true) {
      std::vector<TestFunction> fs;
      for (int s : cur) fs.push_back(delta_function(m, m->site_at(s)));
      if (!a.evaluate(obj, fs).is_zero()) return false;
      int i = a.arity - 1;
      while (i >= 0 && ++cur[i] == n) cur[i--] = 0;
      if (i < 0) break;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("category construction: equivariance and closure") {
  auto cat = small_category();
  CHECK(cat->object_count() == 2);  // object and its self-union
  CHECK(cat->gauge_equivariant());

  // Morphism set is closed under composition.
  for (const auto& m1 : cat->morphisms())
    for (const auto& m2 : cat->morphisms()) {
      if (m2.source != m1.target) continue;
      Embedding comp = compose(m2.embedding, m1.embedding);
      bool found = false;
      for (const auto& m3 : cat->morphisms())
        if (m3.source == m1.source && m3.target == m2.target &&
            m3.embedding.site_map == comp.site_map)
          found = true;
      CHECK(found);
    }
}

TEST_CASE("gauge action kills constants and is antisymmetric") {
  auto cat = small_category();
  const auto& m = cat->object(0).spacetime;
  TestFunction ones{m, std::vector<Rational>(m->site_count(), rat(1))};
  CHECK(cat->gauge_action(0, 0, ones).is_zero());
  // <rho f, g> = -<f, rho g>.
  Rng rng(301);
  TestFunction f = zero_function(m), g = zero_function(m);
  for (auto& v : f.values) v = rng.small_rational();
  for (auto& v : g.values) v = rng.small_rational();
  CHECK(dot(cat->gauge_action(0, 0, f), g) == -dot(f, cat->gauge_action(0, 0, g)));
  // The induced class map is infinitesimally symplectic.
  CHECK(sigma_standard(*m, class_of(cat->gauge_action(0, 0, f)), class_of(g)) ==
        -sigma_standard(*m, class_of(f), class_of(cat->gauge_action(0, 0, g))));
}

TEST_CASE("naturality: covariant candidates pass, fixed site fails") {
  auto cat = small_category();
  CHECK(check_naturality(candidate_from_json(cat, linear_json())).natural);
  CHECK(check_naturality(candidate_from_json(cat, unit_json())).natural);
  CHECK(check_naturality(candidate_from_json(cat, density_json())).natural);
  CHECK(check_naturality(candidate_from_json(cat, covariant_density_json())).natural);
  CHECK(check_naturality(candidate_from_json(cat, antifield_json())).natural);

  auto rep = check_naturality(candidate_from_json(cat, fixed_site_json()));
  CHECK(!rep.natural);
  CHECK(!rep.morphism_label.empty());
}

TEST_CASE("product: graded commutativity and the p=q=1 expansion") {
  auto cat = small_category();
  NatField lin = candidate_from_json(cat, linear_json());
  NatField unit = candidate_from_json(cat, unit_json());
  NatField theta = candidate_from_json(cat, antifield_json());

  // Even-even commute.
  CHECK(fields_equal(field_product(lin, unit), field_product(unit, lin)));

  // Odd-odd anticommute: evaluate both orders.
  NatField tt = field_product(theta, theta);
  CHECK(field_is_zero(tt));  // shuffle square of an odd field vanishes

  NatField theta2 = theta;
  theta2.name = "theta_shifted";
  theta2.evaluate = [cat](int obj, const std::vector<TestFunction>& fs) {
    TestFunction moved = cat->gauge_action(obj, 0, fs.at(0));
    return FieldValue::antifield(cat->object(obj).spacetime, cat->gauge_dim(),
                                 class_of(moved));
  };
  NatField ab = field_product(theta, theta2);
  NatField ba = field_product(theta2, theta);
  NatField ba_neg = ba;
  auto ba_eval = ba.evaluate;
  ba_neg.evaluate = [ba_eval](int obj, const std::vector<TestFunction>& fs) {
    return ba_eval(obj, fs).scaled(RC(rat(-1)));
  };
  CHECK(fields_equal(ab, ba_neg));

  // (Phi Psi)(f,g) = Phi(f)Psi(g) + Phi(g)Psi(f) at p = q = 1.
  NatField prod = field_product(lin, lin);
  const auto& m = cat->object(0).spacetime;
  TestFunction f = delta_function(m, Site{0, 1, 0});
  TestFunction g = delta_function(m, Site{0, 2, 1});
  FieldValue direct = prod.evaluate(0, {f, g});
  FieldValue expect =
      FieldValue::from_observable(smeared_field(f) * smeared_field(g), 1) +
      FieldValue::from_observable(smeared_field(g) * smeared_field(f), 1);
  CHECK(direct == expect);

  // Products of natural fields stay natural.
  CHECK(check_naturality(prod).natural);
}

TEST_CASE("brst: closed fields and s^2 = 0") {
  auto cat = small_category();
  NatField lin = candidate_from_json(cat, linear_json());
  NatField unit = candidate_from_json(cat, unit_json());
  NatField quad = candidate_from_json(cat, covariant_density_json());
  NatField dens = candidate_from_json(cat, density_json());
  NatField theta = candidate_from_json(cat, antifield_json());

  CHECK(field_is_zero(field_brst(lin)));
  CHECK(field_is_zero(field_brst(unit)));
  CHECK(field_is_zero(field_brst(quad)));
  CHECK(!field_is_zero(field_brst(dens)));  // pointwise density is not closed

  CHECK(field_is_zero(field_brst(field_brst(dens))));
  CHECK(field_is_zero(field_brst(field_brst(theta))));

  // s output raises the ghost number by one on values.
  FieldValue v = field_brst(theta).evaluate(
      0, {delta_function(cat->object(0).spacetime, Site{0, 1, 1})});
  int g = 0;
  CHECK(v.homogeneous(&g));
  if (!v.is_zero()) CHECK(g == 0);
}

TEST_CASE("brst satisfies the graded Leibniz rule") {
  auto cat = small_category();
  NatField lin = candidate_from_json(cat, linear_json());
  NatField dens = candidate_from_json(cat, density_json());
  NatField theta = candidate_from_json(cat, antifield_json());

  auto leibniz = [&](const NatField& a, const NatField& b) {
    NatField lhs = field_brst(field_product(a, b));
    NatField sa_b = field_product(field_brst(a), b);
    NatField a_sb = field_product(a, field_brst(b));
    int sign = (a.ghost_number % 2 == 0) ? 1 : -1;
    NatField rhs = sa_b;
    auto sa_b_eval = sa_b.evaluate;
    auto a_sb_eval = a_sb.evaluate;
    rhs.evaluate = [sa_b_eval, a_sb_eval, sign](
                       int obj, const std::vector<TestFunction>& fs) {
      return sa_b_eval(obj, fs) + a_sb_eval(obj, fs).scaled(RC(rat(sign)));
    };
    return fields_equal(lhs, rhs);
  };

  CHECK(leibniz(lin, lin));
  CHECK(leibniz(lin, dens));
  CHECK(leibniz(theta, lin));
  CHECK(leibniz(dens, theta));
}

TEST_CASE("brst preserves naturality") {
  auto cat = small_category();
  NatField dens = candidate_from_json(cat, density_json());
  CHECK(check_naturality(field_brst(dens)).natural);
  NatField theta = candidate_from_json(cat, antifield_json());
  CHECK(check_naturality(field_brst(theta)).natural);
}

TEST_CASE("cohomology probe classification") {
  auto cat = small_category();
  NatField unit = candidate_from_json(cat, unit_json());
  NatField lin = candidate_from_json(cat, linear_json());
  NatField quad = candidate_from_json(cat, covariant_density_json());
  NatField dens = candidate_from_json(cat, density_json());
  NatField theta = candidate_from_json(cat, antifield_json());
  NatField fixture = field_brst(theta);
  fixture.name = "exact_fixture";
  fixture.ghost_number = 0;

  auto entries = field_cohomology_probe({unit, lin, quad, dens, fixture});
  REQUIRE(entries.size() == 5);
  CHECK(entries[0].closed);   // unit
  CHECK(!entries[0].exact);
  CHECK(entries[1].closed);   // linear
  CHECK(!entries[1].exact);
  CHECK(entries[2].closed);   // covariant quadratic density
  CHECK(!entries[2].exact);
  CHECK(!entries[3].closed);  // pointwise density
  CHECK(entries[4].closed);   // constructed fixture
  CHECK(entries[4].exact);
}
