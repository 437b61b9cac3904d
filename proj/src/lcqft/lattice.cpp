#include "lcqft/lattice.hpp"

#include <algorithm>
#include <set>

namespace lcqft {

std::string to_string(const Site& s) {
  return "(" + std::to_string(s.comp) + "," + std::to_string(s.t) + "," +
         std::to_string(s.x) + ")";
}

Spacetime::Spacetime(std::vector<Component> comps) : comps_(std::move(comps)) {
  offsets_.reserve(comps_.size());
  for (const auto& c : comps_) {
    offsets_.push_back(total_sites_);
    total_sites_ += c.sites();
  }
}

SpacetimePtr Spacetime::create(std::vector<Component> comps) {
  for (const auto& c : comps) {
    if (c.n_t < 3 || c.n_x < 3)
      throw Error(ErrorCode::kInvalidArgument,
                  "component needs n_t >= 3 and n_x >= 3");
    if (static_cast<int>(c.coupling.size()) != c.sites() ||
        static_cast<int>(c.mass_sq.size()) != c.sites())
      throw Error(ErrorCode::kInvalidArgument,
                  "coefficient arrays must have n_t*n_x entries");
    for (const auto& v : c.coupling)
      if (sgn(v) <= 0)
        throw Error(ErrorCode::kInvalidArgument, "coupling must be positive");
    for (const auto& v : c.mass_sq)
      if (sgn(v) < 0)
        throw Error(ErrorCode::kInvalidArgument, "mass_sq must be >= 0");
  }
  return SpacetimePtr(new Spacetime(std::move(comps)));
}

namespace {

std::vector<Rational> coefficient_array(const nlohmann::json& j,
                                        const std::string& key, int n_t,
                                        int n_x, const Rational& dflt) {
  int n = n_t * n_x;
  if (!j.contains(key)) return std::vector<Rational>(n, dflt);
  const auto& v = j.at(key);
  auto scalar = [&](const nlohmann::json& e) -> Rational {
    if (e.is_number_integer()) return rat(e.get<long>());
    if (e.is_string()) {
      auto r = parse_rational(e.get<std::string>());
      if (!r)
        throw Error(ErrorCode::kParse, "bad rational literal in " + key);
      return *r;
    }
    throw Error(ErrorCode::kParse,
                key + " entries must be integers or \"p/q\" strings");
  };
  if (v.is_array()) {
    if (static_cast<int>(v.size()) != n)
      throw Error(ErrorCode::kParse, key + " array must have n_t*n_x entries");
    std::vector<Rational> out;
    out.reserve(n);
    for (const auto& e : v) out.push_back(scalar(e));
    return out;
  }
  return std::vector<Rational>(n, scalar(v));
}

Component component_from_json(const nlohmann::json& j) {
  if (!j.contains("n_t") || !j.contains("n_x"))
    throw Error(ErrorCode::kParse, "component needs n_t and n_x");
  Component c;
  c.n_t = j.at("n_t").get<int>();
  c.n_x = j.at("n_x").get<int>();
  c.coupling = coefficient_array(j, "coupling", c.n_t, c.n_x, rat(1));
  c.mass_sq = coefficient_array(j, "mass_sq", c.n_t, c.n_x, rat(0));
  return c;
}

}  // namespace

SpacetimePtr Spacetime::from_json(const nlohmann::json& j) {
  std::vector<Component> comps;
  if (j.contains("components")) {
    for (const auto& cj : j.at("components")) comps.push_back(component_from_json(cj));
  } else {
    comps.push_back(component_from_json(j));
  }
  return create(std::move(comps));
}

nlohmann::json Spacetime::to_json() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : comps_) {
    nlohmann::json cj;
    cj["n_t"] = c.n_t;
    cj["n_x"] = c.n_x;
    nlohmann::json coup = nlohmann::json::array();
    for (const auto& v : c.coupling) coup.push_back(to_string(v));
    nlohmann::json mass = nlohmann::json::array();
    for (const auto& v : c.mass_sq) mass.push_back(to_string(v));
    cj["coupling"] = coup;
    cj["mass_sq"] = mass;
    comps.push_back(cj);
  }
  return nlohmann::json{{"components", comps}};
}

int Spacetime::index_of(const Site& s) const {
  return offsets_.at(s.comp) + comps_.at(s.comp).idx(s.t, s.x);
}

Site Spacetime::site_at(int index) const {
  for (int c = 0; c < component_count(); ++c) {
    int local = index - offsets_[c];
    if (local >= 0 && local < comps_[c].sites())
      return Site{c, local / comps_[c].n_x, local % comps_[c].n_x};
  }
  throw Error(ErrorCode::kInvalidArgument, "site index out of range");
}

bool Spacetime::valid_site(const Site& s) const {
  return s.comp >= 0 && s.comp < component_count() && s.t >= 0 &&
         s.t < comps_[s.comp].n_t && s.x >= 0 && s.x < comps_[s.comp].n_x;
}

int Spacetime::circle_dist(int c, int x0, int x1) const {
  int n = comps_.at(c).n_x;
  int d = std::abs(x0 - x1) % n;
  return std::min(d, n - d);
}

bool Spacetime::causally_leq(const Site& p, const Site& q) const {
  if (!valid_site(p) || !valid_site(q))
    throw Error(ErrorCode::kInvalidArgument, "site out of range");
  if (p.comp != q.comp) return false;
  if (q.t < p.t) return false;
  return circle_dist(p.comp, p.x, q.x) <= q.t - p.t;
}

bool Spacetime::spacelike(const Site& p, const Site& q) const {
  return !causally_leq(p, q) && !causally_leq(q, p);
}

std::vector<Site> Spacetime::causal_future(const Site& p) const {
  if (!valid_site(p)) throw Error(ErrorCode::kInvalidArgument, "site out of range");
  std::vector<Site> out;
  const auto& c = comps_[p.comp];
  for (int t = p.t; t < c.n_t; ++t)
    for (int x = 0; x < c.n_x; ++x)
      if (circle_dist(p.comp, p.x, x) <= t - p.t) out.push_back(Site{p.comp, t, x});
  return out;
}

std::vector<Site> Spacetime::causal_past(const Site& p) const {
  if (!valid_site(p)) throw Error(ErrorCode::kInvalidArgument, "site out of range");
  std::vector<Site> out;
  const auto& c = comps_[p.comp];
  for (int t = 0; t <= p.t; ++t)
    for (int x = 0; x < c.n_x; ++x)
      if (circle_dist(p.comp, p.x, x) <= p.t - t) out.push_back(Site{p.comp, t, x});
  return out;
}

bool Spacetime::same_as(const Spacetime& other) const {
  if (component_count() != other.component_count()) return false;
  for (int c = 0; c < component_count(); ++c) {
    const auto& a = comps_[c];
    const auto& b = other.comps_[c];
    if (a.n_t != b.n_t || a.n_x != b.n_x) return false;
    if (a.coupling != b.coupling || a.mass_sq != b.mass_sq) return false;
  }
  return true;
}

Site Embedding::map_site(const Site& s) const {
  return target->site_at(site_map.at(source->index_of(s)));
}

namespace {

AdmissibilityReport violation(const std::string& clause, Site a, Site b,
                              std::string detail = "") {
  AdmissibilityReport r;
  r.admissible = false;
  r.violated_clause = clause;
  r.witness = std::make_pair(a, b);
  r.detail = std::move(detail);
  return r;
}

}  // namespace

bool causally_convex(const Spacetime& m, const std::vector<int>& image_sites) {
  std::vector<char> in_image(m.site_count(), 0);
  for (int idx : image_sites) in_image[idx] = 1;
  // Convexity fails iff some order interval [p,q] between image points leaks
  // outside the image; every such interior site lies on a causal path p->q.
  for (int i : image_sites) {
    Site p = m.site_at(i);
    for (int j : image_sites) {
      Site q = m.site_at(j);
      if (!m.causally_leq(p, q)) continue;
      for (int k = 0; k < m.site_count(); ++k) {
        if (in_image[k]) continue;
        Site r = m.site_at(k);
        if (m.causally_leq(p, r) && m.causally_leq(r, q)) return false;
      }
    }
  }
  return true;
}

AdmissibilityReport check_admissible(const Embedding& chi) {
  const auto& src = *chi.source;
  const auto& tgt = *chi.target;
  if (static_cast<int>(chi.site_map.size()) != src.site_count())
    throw Error(ErrorCode::kInvalidArgument, "site_map must be total on source");
  for (int v : chi.site_map)
    if (v < 0 || v >= tgt.site_count())
      throw Error(ErrorCode::kInvalidArgument, "site_map image out of range");

  // Injectivity.
  {
    std::vector<int> seen(tgt.site_count(), -1);
    for (int i = 0; i < src.site_count(); ++i) {
      if (seen[chi.site_map[i]] >= 0)
        return violation("injective", src.site_at(seen[chi.site_map[i]]),
                         src.site_at(i), "two sites share an image");
      seen[chi.site_map[i]] = i;
    }
  }

  auto img = [&](const Site& s) { return tgt.site_at(chi.site_map[src.index_of(s)]); };

  // Time orientation: the image of the unit time step moves strictly forward.
  for (int c = 0; c < src.component_count(); ++c) {
    const auto& comp = src.component(c);
    for (int t = 0; t + 1 < comp.n_t; ++t)
      for (int x = 0; x < comp.n_x; ++x) {
        Site a{c, t, x}, b{c, t + 1, x};
        if (img(b).t <= img(a).t)
          return violation("time_orientation", a, b,
                           "time successor does not advance in target time");
      }
  }

  // Orientation: the positively oriented spatial successor is preserved.
  for (int c = 0; c < src.component_count(); ++c) {
    const auto& comp = src.component(c);
    for (int t = 0; t < comp.n_t; ++t)
      for (int x = 0; x < comp.n_x; ++x) {
        Site a{c, t, x}, b{c, t, (x + 1) % comp.n_x};
        Site ia = img(a), ib = img(b);
        const auto& tc = tgt.component(ia.comp);
        if (ib.comp != ia.comp || ib.t != ia.t || ib.x != (ia.x + 1) % tc.n_x)
          return violation("orientation", a, b,
                           "spatial successor not mapped to spatial successor");
      }
  }

  // Coefficients: site masses and edge couplings agree under the map.
  for (int c = 0; c < src.component_count(); ++c) {
    const auto& comp = src.component(c);
    for (int t = 0; t < comp.n_t; ++t)
      for (int x = 0; x < comp.n_x; ++x) {
        Site a{c, t, x};
        Site ia = img(a);
        const auto& tc = tgt.component(ia.comp);
        if (comp.mass_at(t, x) != tc.mass_at(ia.t, ia.x))
          return violation("isometric_mass", a, a, "mass_sq differs under map");
        if (comp.coupling_at(t, x) != tc.coupling_at(ia.t, ia.x))
          return violation("isometric_coupling", a, a,
                           "edge coupling differs under map");
      }
  }

  // Causal convexity of the image; checked before order preservation so a
  // leaking interval is reported as the convexity failure it is.
  {
    std::vector<char> in_image(tgt.site_count(), 0);
    for (int v : chi.site_map) in_image[v] = 1;
    for (int i = 0; i < src.site_count(); ++i)
      for (int j = 0; j < src.site_count(); ++j) {
        Site p = tgt.site_at(chi.site_map[i]);
        Site q = tgt.site_at(chi.site_map[j]);
        if (!tgt.causally_leq(p, q)) continue;
        for (int k = 0; k < tgt.site_count(); ++k) {
          if (in_image[k]) continue;
          Site r = tgt.site_at(k);
          if (tgt.causally_leq(p, r) && tgt.causally_leq(r, q))
            return violation("causal_convexity", src.site_at(i), src.site_at(j),
                             "causal path exits and re-enters the image at " +
                                 to_string(r));
        }
      }
  }

  // Causal order preserved in both directions.
  for (int i = 0; i < src.site_count(); ++i)
    for (int j = 0; j < src.site_count(); ++j) {
      Site p = src.site_at(i), q = src.site_at(j);
      bool rel_src = src.causally_leq(p, q);
      bool rel_tgt = tgt.causally_leq(tgt.site_at(chi.site_map[i]),
                                      tgt.site_at(chi.site_map[j]));
      if (rel_src != rel_tgt)
        return violation("order_isomorphism", p, q,
                         rel_src ? "related pair loses relation in target"
                                 : "unrelated pair becomes related in target");
    }

  AdmissibilityReport ok;
  ok.admissible = true;
  return ok;
}

Embedding identity_embedding(const SpacetimePtr& m) {
  Embedding e;
  e.source = m;
  e.target = m;
  e.site_map.resize(m->site_count());
  for (int i = 0; i < m->site_count(); ++i) e.site_map[i] = i;
  return e;
}

Embedding compose(const Embedding& second, const Embedding& first) {
  if (!first.target->same_as(*second.source))
    throw Error(ErrorCode::kSpacetimeMismatch,
                "embeddings not composable: target/source mismatch");
  Embedding e;
  e.source = first.source;
  e.target = second.target;
  e.site_map.resize(first.site_map.size());
  for (size_t i = 0; i < first.site_map.size(); ++i)
    e.site_map[i] = second.site_map.at(first.site_map[i]);
  return e;
}

Embedding translate_embedding(const SpacetimePtr& source,
                              const SpacetimePtr& target, int comp, int dt,
                              int rot) {
  if (source->component_count() != 1)
    throw Error(ErrorCode::kInvalidArgument,
                "translate_embedding wants a connected source");
  const auto& sc = source->component(0);
  const auto& tc = target->component(comp);
  if (sc.n_x != tc.n_x || dt < 0 || dt + sc.n_t > tc.n_t)
    throw Error(ErrorCode::kInvalidArgument,
                "source slab does not fit in target at this offset");
  Embedding e;
  e.source = source;
  e.target = target;
  e.site_map.resize(source->site_count());
  for (int t = 0; t < sc.n_t; ++t)
    for (int x = 0; x < sc.n_x; ++x) {
      int tx = (x + rot) % sc.n_x;
      e.site_map[sc.idx(t, x)] =
          target->component_offset(comp) + tc.idx(t + dt, tx);
    }
  return e;
}

bool slab_valid(const CauchySlab& slab) {
  if (!slab.spacetime || slab.spacetime->is_empty()) return false;
  if (slab.t_high < slab.t_low + 1) return false;
  for (const auto& c : slab.spacetime->components())
    if (slab.t_low < 1 || slab.t_high > c.n_t - 2) return false;
  return true;
}

std::pair<SpacetimePtr, Embedding> slab_subspacetime(const CauchySlab& slab) {
  if (!slab_valid(slab))
    throw Error(ErrorCode::kSlabTooThin,
                "slab needs t_high >= t_low+1 and one margin row each side");
  const auto& m = *slab.spacetime;
  std::vector<Component> comps;
  int rows = slab.t_high - slab.t_low + 1;
  if (rows < 3)
    throw Error(ErrorCode::kSlabTooThin,
                "slab subspacetime needs at least 3 rows");
  for (const auto& c : m.components()) {
    Component sc;
    sc.n_t = rows;
    sc.n_x = c.n_x;
    for (int t = slab.t_low; t <= slab.t_high; ++t)
      for (int x = 0; x < c.n_x; ++x) {
        sc.coupling.push_back(c.coupling_at(t, x));
        sc.mass_sq.push_back(c.mass_at(t, x));
      }
    comps.push_back(std::move(sc));
  }
  SpacetimePtr sub = Spacetime::create(std::move(comps));
  Embedding incl;
  incl.source = sub;
  incl.target = slab.spacetime;
  incl.site_map.resize(sub->site_count());
  for (int c = 0; c < sub->component_count(); ++c) {
    const auto& sc = sub->component(c);
    for (int t = 0; t < sc.n_t; ++t)
      for (int x = 0; x < sc.n_x; ++x)
        incl.site_map[sub->component_offset(c) + sc.idx(t, x)] =
            m.component_offset(c) + m.component(c).idx(t + slab.t_low, x);
  }
  return {sub, incl};
}

DisjointUnion disjoint_union(const SpacetimePtr& m1, const SpacetimePtr& m2) {
  std::vector<Component> comps = m1->components();
  for (const auto& c : m2->components()) comps.push_back(c);
  DisjointUnion u;
  u.object = Spacetime::create(std::move(comps));
  u.inj1.source = m1;
  u.inj1.target = u.object;
  u.inj1.site_map.resize(m1->site_count());
  for (int i = 0; i < m1->site_count(); ++i) u.inj1.site_map[i] = i;
  u.inj2.source = m2;
  u.inj2.target = u.object;
  u.inj2.site_map.resize(m2->site_count());
  for (int i = 0; i < m2->site_count(); ++i)
    u.inj2.site_map[i] = m1->site_count() + i;
  return u;
}

Embedding glue_embeddings(const Embedding& chi1, const Embedding& chi2) {
  if (!chi1.target->same_as(*chi2.target))
    throw Error(ErrorCode::kSpacetimeMismatch, "gluing needs a common target");
  const auto& tgt = *chi1.target;
  for (int i : chi1.site_map)
    for (int j : chi2.site_map) {
      Site p = tgt.site_at(i), q = tgt.site_at(j);
      if (tgt.causally_leq(p, q) || tgt.causally_leq(q, p))
        throw Error(ErrorCode::kCausallyRelatedImages,
                    "images are causally related at " + to_string(p) + " ~ " +
                        to_string(q));
    }
  DisjointUnion u = disjoint_union(chi1.source, chi2.source);
  Embedding glued;
  glued.source = u.object;
  glued.target = chi1.target;
  glued.site_map.reserve(u.object->site_count());
  for (int v : chi1.site_map) glued.site_map.push_back(v);
  for (int v : chi2.site_map) glued.site_map.push_back(v);
  return glued;
}

Embedding diamond_map(const SpacetimePtr& source, const SpacetimePtr& target,
                      int comp, int t_center, int x_center) {
  // Collect the diamond J^+(bottom) n J^-(top) around the center, then pack
  // the source sites onto it in raster order. No admissibility promised.
  const auto& tc = target->component(comp);
  int radius = 0;
  std::vector<int> patch;
  while (static_cast<int>(patch.size()) < source->site_count()) {
    ++radius;
    patch.clear();
    Site bottom{comp, t_center - radius, x_center};
    Site top{comp, t_center + radius, x_center};
    if (bottom.t < 0 || top.t >= tc.n_t)
      throw Error(ErrorCode::kInvalidArgument,
                  "diamond does not fit in target component");
    for (int t = bottom.t; t <= top.t; ++t)
      for (int x = 0; x < tc.n_x; ++x) {
        Site s{comp, t, x};
        if (target->causally_leq(bottom, s) && target->causally_leq(s, top))
          patch.push_back(target->index_of(s));
      }
  }
  Embedding e;
  e.source = source;
  e.target = target;
  e.site_map.assign(patch.begin(), patch.begin() + source->site_count());
  return e;
}

std::vector<std::vector<Site>> enumerate_causal_paths(const Spacetime& m,
                                                      const Site& p,
                                                      const Site& q) {
  std::vector<std::vector<Site>> paths;
  if (!m.causally_leq(p, q)) return paths;
  std::vector<Site> current{p};
  const int n_x = m.component(p.comp).n_x;
  auto step = [&](auto&& self, const Site& at) -> void {
    if (at.t == q.t) {
      if (at.x == q.x) paths.push_back(current);
      return;
    }
    for (int dx : {-1, 0, 1}) {
      Site next{at.comp, at.t + 1, ((at.x + dx) % n_x + n_x) % n_x};
      if (!m.causally_leq(next, q)) continue;
      current.push_back(next);
      self(self, next);
      current.pop_back();
    }
  };
  if (p == q) return {{p}};
  step(step, p);
  return paths;
}

}  // namespace lcqft
