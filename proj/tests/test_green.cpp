#include <doctest.h>

#include "lcqft/green.hpp"
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

SpacetimePtr random_spacetime(Rng& rng, int n_t, int n_x) {
  Component comp;
  comp.n_t = n_t;
  comp.n_x = n_x;
  for (int i = 0; i < n_t * n_x; ++i) {
    comp.coupling.push_back(rng.positive_rational(3, 3));
    comp.mass_sq.push_back(rat(rng.range(0, 2), rng.range(1, 3)));
  }
  return Spacetime::create({comp});
}

}  // namespace

TEST_CASE("stencil values for a delta source") {
  auto m = uniform(4, 6);
  TestFunction phi = delta_function(m, Site{0, 1, 0});
  TestFunction p = kg_apply(phi);
  auto at = [&](int t, int x) { return p.values[m->index_of(Site{0, t, x})]; };
  CHECK(at(2, 0) == rat(1));
  CHECK(at(0, 0) == rat(1));
  CHECK(at(1, 0) == rat(0));  // -2 from time, +2 from the spatial part
  CHECK(at(1, 1) == rat(-1));
  CHECK(at(1, 5) == rat(-1));
  CHECK(at(3, 0) == rat(0));
}

TEST_CASE("massless operator annihilates constants on interior rows") {
  auto m = uniform(5, 4, rat(2, 3), rat(0));
  TestFunction ones{m, std::vector<Rational>(m->site_count(), rat(1))};
  TestFunction p = kg_apply(ones);
  for (int t = 1; t <= 3; ++t)
    for (int x = 0; x < 4; ++x)
      CHECK(p.values[m->index_of(Site{0, t, x})] == rat(0));
}

TEST_CASE("retarded propagator first steps and sharp light cone") {
  auto m = uniform(5, 6);
  TestFunction f = delta_function(m, Site{0, 0, 0});
  TestFunction u = green_retarded(f);
  auto at = [&](int t, int x) { return u.values[m->index_of(Site{0, t, x})]; };
  CHECK(at(1, 0) == rat(1));
  CHECK(at(2, 0) == rat(0));
  CHECK(at(2, 1) == rat(1));
  CHECK(at(2, 5) == rat(1));
  CHECK(at(0, 0) == rat(0));
}

TEST_CASE("green operators invert the field operator away from the last row") {
  Rng rng(7);
  auto m = random_spacetime(rng, 6, 4);
  const auto& comp = m->component(0);
  for (int trial = 0; trial < 5; ++trial) {
    TestFunction f = zero_function(m);
    for (auto& v : f.values) v = rng.small_rational();
    TestFunction pu = kg_apply(green_retarded(f));
    for (int t = 0; t <= comp.n_t - 2; ++t)
      for (int x = 0; x < comp.n_x; ++x)
        CHECK(pu.values[comp.idx(t, x)] == f.values[comp.idx(t, x)]);
    TestFunction pv = kg_apply(green_advanced(f));
    for (int t = 1; t <= comp.n_t - 1; ++t)
      for (int x = 0; x < comp.n_x; ++x)
        CHECK(pv.values[comp.idx(t, x)] == f.values[comp.idx(t, x)]);
  }
}

TEST_CASE("kg matrix is symmetric and E is antisymmetric, exactly") {
  Rng rng(11);
  auto m = random_spacetime(rng, 5, 4);
  const auto& comp = m->component(0);
  RationalMatrix p = kg_matrix(comp);
  for (int i = 0; i < comp.sites(); ++i)
    for (int j = 0; j < comp.sites(); ++j) CHECK(p[i][j] == p[j][i]);

  RationalMatrix ret = green_retarded_matrix(comp);
  RationalMatrix adv = green_advanced_matrix(comp);
  for (int i = 0; i < comp.sites(); ++i)
    for (int j = 0; j < comp.sites(); ++j) CHECK(ret[i][j] == adv[j][i]);

  RationalMatrix e = causal_propagator_matrix(comp);
  for (int i = 0; i < comp.sites(); ++i)
    for (int j = 0; j < comp.sites(); ++j) CHECK(e[i][j] == -e[j][i]);
}

TEST_CASE("cone supports: retarded below, advanced above, E causal") {
  Rng rng(13);
  auto m = random_spacetime(rng, 6, 5);
  const auto& comp = m->component(0);
  RationalMatrix ret = green_retarded_matrix(comp);
  RationalMatrix adv = green_advanced_matrix(comp);
  RationalMatrix e = causal_propagator_matrix(comp);
  for (int i = 0; i < comp.sites(); ++i)
    for (int j = 0; j < comp.sites(); ++j) {
      Site p = m->site_at(i), q = m->site_at(j);
      if (!m->causally_leq(q, p)) CHECK(ret[i][j] == rat(0));
      if (!m->causally_leq(p, q)) CHECK(adv[i][j] == rat(0));
      if (m->spacelike(p, q)) CHECK(e[i][j] == rat(0));
    }
}

TEST_CASE("spacelike pairing vanishes exactly") {
  auto m = uniform(6, 8, rat(1, 2), rat(1, 4));
  TestFunction f = delta_function(m, Site{0, 2, 0});
  TestFunction g = delta_function(m, Site{0, 2, 4});
  CHECK(pairing_E(f, g) == rat(0));
  CHECK(pairing_E(g, f) == rat(0));
}

TEST_CASE("timeslice reduction: E f' = E f exactly, support in the slab") {
  Rng rng(17);
  auto m = random_spacetime(rng, 8, 4);
  CauchySlab slab{m, 2, 4};
  for (int trial = 0; trial < 8; ++trial) {
    TestFunction f = zero_function(m);
    for (auto& v : f.values) v = rng.small_rational();
    TestFunction fr = timeslice_reduce(f, slab);
    // Support on the two lowest slab rows.
    const auto& comp = m->component(0);
    for (int t = 0; t < comp.n_t; ++t)
      for (int x = 0; x < comp.n_x; ++x)
        if (t != slab.t_low && t != slab.t_low + 1)
          CHECK(fr.values[comp.idx(t, x)] == rat(0));
    // Exact equality of propagator images.
    TestFunction ef = causal_propagator(f);
    TestFunction efr = causal_propagator(fr);
    CHECK(ef.values == efr.values);
  }
}

TEST_CASE("timeslice reduction equals the literal cutoff formula") {
  // f' = P(psi * E f) with the sharp step psi and the final-row boundary
  // artifact removed.
  Rng rng(19);
  auto m = random_spacetime(rng, 7, 3);
  CauchySlab slab{m, 3, 5};
  TestFunction f = zero_function(m);
  for (auto& v : f.values) v = rng.small_rational();
  TestFunction u = causal_propagator(f);
  const auto& comp = m->component(0);
  TestFunction cut = zero_function(m);
  for (int t = 0; t < comp.n_t; ++t)
    for (int x = 0; x < comp.n_x; ++x)
      if (t > slab.t_low) cut.values[comp.idx(t, x)] = u.values[comp.idx(t, x)];
  TestFunction literal = kg_apply(cut);
  for (int x = 0; x < comp.n_x; ++x)
    literal.values[comp.idx(comp.n_t - 1, x)] = 0;
  TestFunction fr = timeslice_reduce(f, slab);
  CHECK(literal.values == fr.values);
}

TEST_CASE("slab too thin is rejected") {
  auto m = uniform(6, 4);
  CHECK_THROWS_AS((void)timeslice_reduce(delta_function(m, Site{0, 3, 0}),
                                         CauchySlab{m, 0, 2}),
                  Error);
  CHECK_THROWS_AS((void)timeslice_reduce(delta_function(m, Site{0, 3, 0}),
                                         CauchySlab{m, 3, 3}),
                  Error);
}

TEST_CASE("float mode kernels track the exact ones") {
  Rng rng(23);
  auto m = random_spacetime(rng, 6, 4);
  const auto& comp = m->component(0);
  std::vector<Rational> f(comp.sites());
  std::vector<double> fd(comp.sites());
  for (int i = 0; i < comp.sites(); ++i) {
    f[i] = rng.small_rational();
    fd[i] = to_double(f[i]);
  }
  auto exact = causal_propagator_component<Rational>(comp, f);
  auto approx = causal_propagator_component<double>(comp, fd);
  for (int i = 0; i < comp.sites(); ++i)
    CHECK(std::abs(approx[i] - to_double(exact[i])) < 1e-9);
}
