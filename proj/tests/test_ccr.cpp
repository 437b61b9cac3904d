#include <doctest.h>

#include "lcqft/ccr.hpp"
#include "lcqft/exact_linalg.hpp"
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
    comp.coupling.push_back(rng.positive_rational(3, 2));
    comp.mass_sq.push_back(rat(rng.range(0, 2), rng.range(1, 3)));
  }
  return Spacetime::create({comp});
}

TestFunction random_function(Rng& rng, const SpacetimePtr& m) {
  TestFunction f = zero_function(m);
  for (auto& v : f.values) v = rng.small_rational();
  return f;
}

}  // namespace

TEST_CASE("canonical classes: representative inverts class_of") {
  Rng rng(41);
  auto m = random_spacetime(rng, 6, 4);
  int dim = ClassSpace::dimension(*m);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Rational> data(dim);
    for (auto& v : data) v = rng.small_rational();
    CHECK(class_of(representative(m, data)) == data);
  }
}

TEST_CASE("field-equation ideal: phi(Pg) = 0 for interior g") {
  auto m = uniform(6, 4, rat(1, 2), rat(1, 3));
  TestFunction g = delta_function(m, Site{0, 2, 1});
  CHECK(time_interior_support(g));
  CHECK(smeared_field(kg_apply(g)).is_zero());
}

TEST_CASE("equal propagator images give identical observables") {
  Rng rng(43);
  auto m = random_spacetime(rng, 7, 3);
  TestFunction f = random_function(rng, m);
  CauchySlab slab{m, 2, 4};
  TestFunction fr = timeslice_reduce(f, slab);
  CHECK(smeared_field(f) == smeared_field(fr));
  CHECK(smeared_field(kg_apply(delta_function(m, Site{0, 3, 1}))).is_zero());
}

TEST_CASE("generator data of deltas on the 4x6 lattice, regression-pinned") {
  Component c;
  c.n_t = 4;
  c.n_x = 6;
  c.coupling.assign(24, rat(1));
  c.mass_sq.assign(24, rat(0));
  auto m = Spacetime::create({c});
  // E delta_(0,0) has Cauchy rows (0, delta_{x=0}).
  auto cls = class_of(delta_function(m, Site{0, 0, 0}));
  for (size_t k = 0; k < cls.size(); ++k)
    CHECK(cls[k] == (k == 6 ? rat(1) : rat(0)));
  // E delta_(2,1): row 0 = -delta_0 - delta_2, row 1 = -delta_1.
  auto cls2 = class_of(delta_function(m, Site{0, 2, 1}));
  for (size_t k = 0; k < cls2.size(); ++k) {
    Rational want = (k == 0 || k == 2 || k == 7) ? rat(-1) : rat(0);
    CHECK(cls2[k] == want);
  }
}

TEST_CASE("sigma on classes equals the Green pairing, exactly") {
  Rng rng(47);
  auto m = random_spacetime(rng, 6, 5);
  for (int trial = 0; trial < 10; ++trial) {
    TestFunction f = random_function(rng, m);
    TestFunction g = random_function(rng, m);
    CHECK(sigma_standard(*m, class_of(f), class_of(g)) == pairing_E(f, g));
  }
}

TEST_CASE("commutation rule and locality") {
  Rng rng(53);
  auto m = random_spacetime(rng, 6, 4);
  TestFunction f = random_function(rng, m);
  TestFunction g = random_function(rng, m);
  Observable comm = commutator(smeared_field(f), smeared_field(g));
  Observable expected =
      Observable::scalar(m, RC::i_times(pairing_E(f, g)));
  CHECK(comm == expected);

  // Spacelike supports commute exactly.
  auto wide = uniform(5, 8, rat(1, 2), rat(1, 4));
  TestFunction a = delta_function(wide, Site{0, 2, 0});
  TestFunction b = delta_function(wide, Site{0, 2, 4});
  CHECK(commutator(smeared_field(a), smeared_field(b)).is_zero());
}

TEST_CASE("algebra is unital, associative, and *-involutive") {
  Rng rng(59);
  auto m = uniform(5, 3);
  TestFunction f = random_function(rng, m);
  TestFunction g = random_function(rng, m);
  TestFunction h = random_function(rng, m);
  Observable a = smeared_field(f);
  Observable b = smeared_field(g) * smeared_field(h) +
                 Observable::scalar(m, RC(rat(2), rat(1)));
  Observable c = smeared_field(h) - smeared_field(f);

  CHECK((Observable::unit(m) * a) == a);
  CHECK((a * Observable::unit(m)) == a);
  CHECK(((a * b) * c) == (a * (b * c)));
  CHECK((a * b).adjoint() == (b.adjoint() * a.adjoint()));
  CHECK(a.adjoint() == a);  // hermitian generator with real smearing
}

TEST_CASE("morphism action: identity, composition, pairing preservation") {
  Rng rng(61);
  auto small = uniform(3, 4, rat(1, 2));
  auto mid = uniform(6, 4, rat(1, 2));
  auto big = uniform(9, 4, rat(1, 2));
  Embedding chi = translate_embedding(small, mid, 0, 2, 1);
  Embedding chi2 = translate_embedding(mid, big, 0, 2, 3);

  TestFunction f = random_function(rng, small);
  TestFunction g = random_function(rng, small);
  Observable a = smeared_field(f) * smeared_field(g);

  CHECK(morphism_action(identity_embedding(small), a) == a);

  Observable via_comp = morphism_action(compose(chi2, chi), a);
  Observable via_steps = morphism_action(chi2, morphism_action(chi, a));
  CHECK(via_comp == via_steps);

  // Pairing preservation through independent Green builds.
  TestFunction pf = zero_function(mid);
  TestFunction pg = zero_function(mid);
  for (int i = 0; i < small->site_count(); ++i) {
    pf.values[chi.site_map[i]] = f.values[i];
    pg.values[chi.site_map[i]] = g.values[i];
  }
  CHECK(pairing_E(pf, pg) == pairing_E(f, g));

  // Unit preservation.
  CHECK(morphism_action(chi, Observable::unit(small)) == Observable::unit(mid));
}

TEST_CASE("morphism action is a homomorphism") {
  Rng rng(67);
  auto small = uniform(3, 3, rat(2));
  auto big = uniform(7, 3, rat(2));
  Embedding chi = translate_embedding(small, big, 0, 3, 2);
  Observable a = smeared_field(random_function(rng, small));
  Observable b = smeared_field(random_function(rng, small)) *
                 smeared_field(random_function(rng, small));
  CHECK(morphism_action(chi, a * b) ==
        morphism_action(chi, a) * morphism_action(chi, b));
  CHECK(morphism_action(chi, a + b) ==
        morphism_action(chi, a) + morphism_action(chi, b));
}

TEST_CASE("isotony: class pushforward has full rank") {
  Rng rng(71);
  auto small = uniform(3, 5, rat(1, 3), rat(2));
  auto big = uniform(8, 5, rat(1, 3), rat(2));
  Embedding chi = translate_embedding(small, big, 0, 4, 2);
  auto cols = morphism_class_matrix(chi);
  std::vector<SparseVec> sparse_cols;
  for (const auto& c : cols) sparse_cols.push_back(sparse_from_dense(c));
  CHECK(rank_of(sparse_cols) == ClassSpace::dimension(*small));
}

TEST_CASE("non-admissible embeddings are rejected by the functor") {
  auto m = uniform(4, 4);
  Embedding e = identity_embedding(m);
  std::swap(e.site_map[0], e.site_map[1]);  // breaks orientation
  CHECK_THROWS_AS((void)morphism_action(e, Observable::unit(m)), Error);
}

TEST_CASE("timeslice axiom at the observable level") {
  Rng rng(73);
  auto m = random_spacetime(rng, 8, 3);
  CauchySlab slab{m, 3, 5};
  Observable a = smeared_field(random_function(rng, m)) *
                 smeared_field(random_function(rng, m));
  CHECK(timeslice_reduce_observable(a, slab) == a);
}

TEST_CASE("tensor structure: A(empty) = scalars") {
  auto e = Spacetime::empty();
  CHECK(ClassSpace::dimension(*e) == 0);
  Observable s = Observable::scalar(e, RC(rat(3), rat(-1)));
  CHECK(s.is_scalar());
  CHECK((s * s) == Observable::scalar(e, RC(rat(3), rat(-1)) * RC(rat(3), rat(-1))));
}

TEST_CASE("tensor split and the causality chain") {
  Rng rng(79);
  auto m1 = uniform(4, 3, rat(1, 2));
  auto m2 = uniform(4, 4, rat(1), rat(1, 3));
  DisjointUnion u = disjoint_union(m1, m2);

  TestFunction f1 = random_function(rng, m1);
  TestFunction f2 = random_function(rng, m2);
  Observable a1 = smeared_field(f1) * smeared_field(f1);
  Observable a2 = smeared_field(f2);

  // A(iota_1)(A1) = A1 (x) 1.
  Observable ia1 = morphism_action(u.inj1, a1);
  TensorFactorization split = tensor_split(ia1);
  REQUIRE(split.factors.size() == a1.terms().size());
  Observable rebuilt = Observable::zero(u.object);
  for (const auto& [b1, b2] : split.factors) {
    CHECK(b2.is_scalar());
    rebuilt = rebuilt + tensor_embed(b1, b2, u.object);
  }
  CHECK(rebuilt == ia1);

  // Cross-component commutator vanishes exactly.
  Observable ia2 = morphism_action(u.inj2, a2);
  CHECK(commutator(ia1, ia2).is_zero());

  // Round trip on a mixed product.
  Observable mixed = ia1 * ia2 + Observable::unit(u.object);
  TensorFactorization msplit = tensor_split(mixed);
  Observable msum = Observable::zero(u.object);
  for (const auto& [b1, b2] : msplit.factors)
    msum = msum + tensor_embed(b1, b2, u.object);
  CHECK(msum == mixed);
}

TEST_CASE("glued embedding reproduces the causality computation") {
  Rng rng(83);
  auto m1 = uniform(3, 3);
  auto m2 = uniform(3, 3, rat(1), rat(1));
  auto t1 = uniform(6, 3);
  auto t2 = uniform(6, 3, rat(1), rat(1));
  DisjointUnion target = disjoint_union(t1, t2);
  Embedding chi1 = compose(target.inj1, translate_embedding(m1, t1, 0, 1, 0));
  Embedding chi2 = compose(target.inj2, translate_embedding(m2, t2, 0, 2, 1));
  Embedding glued = glue_embeddings(chi1, chi2);

  Observable a1 = smeared_field(random_function(rng, m1));
  Observable a2 = smeared_field(random_function(rng, m2)) *
                  smeared_field(random_function(rng, m2));

  DisjointUnion usrc = disjoint_union(m1, m2);
  Observable tens1 = morphism_action(usrc.inj1, a1);  // A1 (x) 1
  Observable tens2 = morphism_action(usrc.inj2, a2);  // 1 (x) A2
  Observable inner = commutator(tens1, tens2);
  CHECK(inner.is_zero());
  Observable chain = morphism_action(glued, inner);
  CHECK(chain.is_zero());
  CHECK(commutator(morphism_action(chi1, a1), morphism_action(chi2, a2))
            .is_zero());
}
