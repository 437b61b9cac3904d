#include <doctest.h>

#include <set>

#include "lcqft/lattice.hpp"
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

std::set<int> row_of_future(const Spacetime& m, Site p, int row) {
  std::set<int> xs;
  for (const auto& s : m.causal_future(p))
    if (s.t == row) xs.insert(s.x);
  return xs;
}

}  // namespace

TEST_CASE("causal cone matches the unit-speed stencil") {
  auto m = uniform(4, 8);
  CHECK(row_of_future(*m, Site{0, 0, 0}, 1) == std::set<int>{7, 0, 1});
  CHECK(row_of_future(*m, Site{0, 2, 5}, 2) == std::set<int>{5});  // reflexive row
  auto m4 = uniform(4, 4);
  CHECK(row_of_future(*m4, Site{0, 0, 0}, 2) == std::set<int>{0, 1, 2, 3});  // wraps
}

TEST_CASE("causal relation is a partial order") {
  auto m = uniform(4, 5, rat(1, 2), rat(1, 3));
  for (int i = 0; i < m->site_count(); ++i) {
    Site p = m->site_at(i);
    CHECK(m->causally_leq(p, p));
    for (int j = 0; j < m->site_count(); ++j) {
      Site q = m->site_at(j);
      if (m->causally_leq(p, q) && m->causally_leq(q, p)) CHECK(p == q);
      for (int k = 0; k < m->site_count(); ++k) {
        Site r = m->site_at(k);
        if (m->causally_leq(p, q) && m->causally_leq(q, r))
          CHECK(m->causally_leq(p, r));
      }
    }
  }
}

TEST_CASE("identity and slab inclusions are admissible") {
  auto m = uniform(8, 5);
  CHECK(is_admissible(identity_embedding(m)));

  auto slab = uniform(3, 5);
  Embedding incl = translate_embedding(slab, m, 0, 2, 0);
  CHECK(is_admissible(incl));

  Embedding rotated = translate_embedding(slab, m, 0, 2, 3);
  CHECK(is_admissible(rotated));
}

TEST_CASE("coefficient mismatch is reported as isometry violation") {
  auto m = uniform(6, 4, rat(1), rat(0));
  auto other = uniform(3, 4, rat(1), rat(1, 7));
  Embedding e = translate_embedding(other, m, 0, 1, 0);
  auto rep = check_admissible(e);
  CHECK(!rep.admissible);
  CHECK(rep.violated_clause == "isometric_mass");
}

TEST_CASE("time reversal is rejected") {
  auto m = uniform(4, 4);
  Embedding e = identity_embedding(m);
  for (int t = 0; t < 4; ++t)
    for (int x = 0; x < 4; ++x)
      e.site_map[m->index_of(Site{0, t, x})] = m->index_of(Site{0, 3 - t, x});
  auto rep = check_admissible(e);
  CHECK(!rep.admissible);
  CHECK(rep.violated_clause == "time_orientation");
}

TEST_CASE("spatial reflection violates orientation") {
  auto m = uniform(4, 5);
  Embedding e = identity_embedding(m);
  for (int t = 0; t < 4; ++t)
    for (int x = 0; x < 5; ++x)
      e.site_map[m->index_of(Site{0, t, x})] = m->index_of(Site{0, t, (5 - x) % 5});
  auto rep = check_admissible(e);
  CHECK(!rep.admissible);
  CHECK(rep.violated_clause == "orientation");
}

TEST_CASE("gap between two patches gives a causal convexity witness") {
  // Two 3x3 blocks stacked in time with an excluded middle row; the causal
  // interval between them leaks through the gap.
  auto m = uniform(9, 3);
  auto m1 = uniform(3, 3);
  auto m2 = uniform(3, 3);
  DisjointUnion u = disjoint_union(m1, m2);
  Embedding e;
  e.source = u.object;
  e.target = m;
  e.site_map.resize(u.object->site_count());
  for (int t = 0; t < 3; ++t)
    for (int x = 0; x < 3; ++x) {
      e.site_map[u.object->index_of(Site{0, t, x})] = m->index_of(Site{0, t, x});
      e.site_map[u.object->index_of(Site{1, t, x})] =
          m->index_of(Site{0, t + 6, x});
    }
  auto rep = check_admissible(e);
  CHECK(!rep.admissible);
  CHECK(rep.violated_clause == "causal_convexity");
  CHECK(rep.witness.has_value());
}

TEST_CASE("diamond map is not an admissible embedding") {
  auto m = uniform(9, 8);
  auto src = uniform(3, 3);
  Embedding e = diamond_map(src, m, 0, 4, 0);
  CHECK(!is_admissible(e));
}

TEST_CASE("composition of admissible embeddings is admissible") {
  auto small = uniform(3, 4);
  auto mid = uniform(5, 4);
  auto big = uniform(9, 4);
  Embedding a = translate_embedding(small, mid, 0, 1, 1);
  Embedding b = translate_embedding(mid, big, 0, 3, 2);
  Embedding c = compose(b, a);
  CHECK(is_admissible(c));
  // Composite matches pointwise.
  for (int i = 0; i < small->site_count(); ++i)
    CHECK(c.site_map[i] == b.site_map[a.site_map[i]]);
}

TEST_CASE("disjoint union: unit, associativity shape, and injections") {
  auto m1 = uniform(4, 3, rat(2, 3));
  auto m2 = uniform(3, 5, rat(1), rat(1, 2));
  DisjointUnion u = disjoint_union(m1, m2);
  CHECK(u.object->component_count() == 2);
  CHECK(is_admissible(u.inj1));
  CHECK(is_admissible(u.inj2));

  // Union with the empty spacetime leaves the object unchanged.
  DisjointUnion ue = disjoint_union(m1, Spacetime::empty());
  CHECK(ue.object->same_as(*m1));

  // Sites of different components are never causally related.
  for (int i = 0; i < m1->site_count(); ++i)
    for (int j = 0; j < m2->site_count(); ++j) {
      Site p = u.object->site_at(u.inj1.site_map[i]);
      Site q = u.object->site_at(u.inj2.site_map[j]);
      CHECK(u.object->spacelike(p, q));
    }
}

TEST_CASE("glueing embeddings with causally disjoint images") {
  auto m1 = uniform(3, 3);
  auto m2 = uniform(3, 4, rat(1), rat(1, 5));
  auto t1 = uniform(6, 3);
  auto t2 = uniform(5, 4, rat(1), rat(1, 5));
  DisjointUnion target = disjoint_union(t1, t2);
  Embedding chi1 = compose(target.inj1, translate_embedding(m1, t1, 0, 1, 0));
  Embedding chi2 = compose(target.inj2, translate_embedding(m2, t2, 0, 0, 2));
  Embedding glued = glue_embeddings(chi1, chi2);
  CHECK(is_admissible(glued));
  CHECK(glued.source->component_count() == 2);

  // Identical images are causally related to themselves.
  CHECK_THROWS_AS((void)glue_embeddings(chi1, chi1), Error);

  // Gluing with an embedding of the empty spacetime reproduces chi1.
  Embedding empty_chi;
  empty_chi.source = Spacetime::empty();
  empty_chi.target = glued.target;
  Embedding with_empty = glue_embeddings(chi1, empty_chi);
  CHECK(with_empty.site_map == chi1.site_map);
}

TEST_CASE("convexity via intervals agrees with path enumeration") {
  auto m = uniform(5, 4);
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> image;
    for (int i = 0; i < m->site_count(); ++i)
      if (rng.flip()) image.push_back(i);
    bool by_interval = causally_convex(*m, image);
    // Path-based oracle: every causal path between image sites stays inside.
    bool by_paths = true;
    std::vector<char> in_image(m->site_count(), 0);
    for (int i : image) in_image[i] = 1;
    for (int i : image)
      for (int j : image) {
        for (const auto& path :
             enumerate_causal_paths(*m, m->site_at(i), m->site_at(j)))
          for (const auto& s : path)
            if (!in_image[m->index_of(s)]) by_paths = false;
      }
    CHECK(by_interval == by_paths);
  }
}

TEST_CASE("spacetime json round trip") {
  nlohmann::json j = {{"n_t", 4},
                      {"n_x", 3},
                      {"coupling", "1/2"},
                      {"mass_sq", nlohmann::json::array(
                                      {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, "1/3"})}};
  auto m = Spacetime::from_json(j);
  CHECK(m->component(0).coupling_at(2, 1) == rat(1, 2));
  CHECK(m->component(0).mass_at(3, 2) == rat(1, 3));
  auto m2 = Spacetime::from_json(m->to_json());
  CHECK(m2->same_as(*m));
}
