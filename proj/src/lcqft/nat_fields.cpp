#include "lcqft/nat_fields.hpp"

#include <algorithm>

#include "lcqft/exact_linalg.hpp"
#include "lcqft/graded.hpp"

namespace lcqft {

FieldValue FieldValue::from_observable(const Observable& a, int gauge_dim) {
  FieldValue v(a.spacetime(), gauge_dim);
  v.add_term(FieldKey{}, a);
  return v;
}

FieldValue FieldValue::antifield(SpacetimePtr m, int gauge_dim,
                                 const std::vector<Rational>& klass) {
  FieldValue v(m, gauge_dim);
  for (size_t k = 0; k < klass.size(); ++k) {
    if (sgn(klass[k]) == 0) continue;
    FieldKey key;
    key.anti.push_back(static_cast<uint32_t>(k));
    v.add_term(key, Observable::scalar(m, RC(klass[k])));
  }
  return v;
}

FieldValue FieldValue::ghost(SpacetimePtr m, int gauge_dim, int mu) {
  FieldValue v(std::move(m), gauge_dim);
  FieldKey key;
  key.ghost.push_back(static_cast<uint8_t>(mu));
  v.add_term(key, Observable::unit(v.spacetime_));
  return v;
}

void FieldValue::add_term(const FieldKey& key, const Observable& a) {
  if (a.is_zero()) return;
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, a);
  } else {
    it->second = it->second + a;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

FieldValue FieldValue::operator+(const FieldValue& o) const {
  FieldValue out = *this;
  for (const auto& [k, a] : o.terms_) out.add_term(k, a);
  return out;
}

FieldValue FieldValue::operator-(const FieldValue& o) const {
  return *this + o.scaled(RC(Rational(-1)));
}

FieldValue FieldValue::scaled(const RC& c) const {
  FieldValue out(spacetime_, gauge_dim_);
  if (c.is_zero()) return out;
  for (const auto& [k, a] : terms_) out.add_term(k, a.scaled(c));
  return out;
}

FieldValue FieldValue::operator*(const FieldValue& o) const {
  FieldValue out(spacetime_, gauge_dim_);
  for (const auto& [ka, aa] : terms_)
    for (const auto& [kb, ab] : o.terms_) {
      FieldKey key;
      // Word [A.anti][A.ghost][B.anti][B.ghost] -> canonical.
      int cross = (ka.ghost.size() * kb.anti.size()) % 2 == 0 ? 1 : -1;
      int s1 = 1, s2 = 1;
      if (!merge_fermionic(ka.anti, kb.anti, key.anti, s1)) continue;
      if (!merge_fermionic(ka.ghost, kb.ghost, key.ghost, s2)) continue;
      Rational sign(cross * s1 * s2);
      out.add_term(key, (aa * ab).scaled(RC(sign)));
    }
  return out;
}

bool FieldValue::homogeneous(int* ghost_number) const {
  bool first = true;
  int g = 0;
  for (const auto& [k, a] : terms_) {
    if (first) {
      g = k.ghost_number();
      first = false;
    } else if (k.ghost_number() != g) {
      return false;
    }
  }
  if (ghost_number && !first) *ghost_number = g;
  return true;
}

std::string FieldValue::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [k, a] : terms_) {
    if (!s.empty()) s += " + ";
    s += "[" + a.to_string() + "]";
    for (uint32_t i : k.anti) s += "*ad[" + std::to_string(i) + "]";
    for (uint8_t mu : k.ghost) s += "*c" + std::to_string(mu + 1);
  }
  return s;
}

namespace {

bool constant_coefficients(const Spacetime& m) {
  for (const auto& c : m.components()) {
    for (const auto& v : c.coupling)
      if (v != c.coupling.front()) return false;
    for (const auto& v : c.mass_sq)
      if (v != c.mass_sq.front()) return false;
  }
  return true;
}

Embedding rotation_automorphism(const SpacetimePtr& m, int r) {
  Embedding e;
  e.source = m;
  e.target = m;
  e.site_map.resize(m->site_count());
  for (int c = 0; c < m->component_count(); ++c) {
    const auto& comp = m->component(c);
    for (int t = 0; t < comp.n_t; ++t)
      for (int x = 0; x < comp.n_x; ++x)
        e.site_map[m->component_offset(c) + comp.idx(t, x)] =
            m->component_offset(c) +
            comp.idx(t, ((x + r) % comp.n_x + comp.n_x) % comp.n_x);
  }
  return e;
}

int rotation_order(const Spacetime& m) {
  long ord = 1;
  for (const auto& c : m.components()) ord = std::lcm(ord, long(c.n_x));
  return static_cast<int>(ord);
}

std::vector<std::vector<Rational>> dense_matrix_of(const Embedding& chi) {
  auto cols = morphism_class_matrix_cached(chi);
  // cols[k] is the image of basis k; store as matrix[row][col].
  int dm = cols.empty() ? 0 : static_cast<int>(cols[0].size());
  std::vector<std::vector<Rational>> mat(dm, std::vector<Rational>(cols.size(), Rational(0)));
  for (size_t k = 0; k < cols.size(); ++k)
    for (int r = 0; r < dm; ++r) mat[r][k] = cols[k][r];
  return mat;
}

}  // namespace

std::shared_ptr<const FieldCategory> FieldCategory::make(
    std::vector<SpacetimePtr> objects, std::vector<int> shift_powers,
    const std::vector<std::pair<int, int>>& unions) {
  auto cat = std::make_shared<FieldCategory>();
  if (shift_powers.empty()) shift_powers = {1};
  cat->shift_powers_ = shift_powers;

  std::vector<SpacetimePtr> all = std::move(objects);
  std::vector<std::pair<int, std::pair<int, int>>> union_info;
  for (auto [i, j] : unions) {
    DisjointUnion u = disjoint_union(all.at(i), all.at(j));
    union_info.push_back({static_cast<int>(all.size()), {i, j}});
    all.push_back(u.object);
  }

  for (const auto& m : all) {
    if (!constant_coefficients(*m))
      throw Error(ErrorCode::kInvalidArgument,
                  "field category objects need site-independent coefficients");
    FieldObject obj;
    obj.spacetime = m;
    for (int k : cat->shift_powers_) {
      auto plus = dense_matrix_of(rotation_automorphism(m, k));
      auto minus = dense_matrix_of(rotation_automorphism(m, -k));
      int d = static_cast<int>(plus.size());
      std::vector<std::vector<Rational>> rho(d, std::vector<Rational>(d, Rational(0)));
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) rho[r][c] = plus[r][c] - minus[r][c];
      obj.rho_hat.push_back(std::move(rho));
    }
    cat->objects_.push_back(std::move(obj));
  }

  // Rotations of every object (identity included so the set is closed).
  for (size_t i = 0; i < all.size(); ++i) {
    int ord = rotation_order(*all[i]);
    for (int r = 0; r < ord; ++r)
      cat->morphisms_.push_back(FieldMorphism{
          static_cast<int>(i), static_cast<int>(i), rotation_automorphism(all[i], r),
          "rot" + std::to_string(r) + "_obj" + std::to_string(i)});
  }
  // Disjoint-union injections, including their rotated composites.
  for (const auto& [uidx, pair] : union_info) {
    DisjointUnion u = disjoint_union(all.at(pair.first), all.at(pair.second));
    int ord1 = rotation_order(*all[pair.first]);
    for (int r = 0; r < ord1; ++r)
      cat->morphisms_.push_back(FieldMorphism{
          pair.first, uidx,
          compose(u.inj1, rotation_automorphism(all[pair.first], r)),
          "inj1rot" + std::to_string(r) + "_u" + std::to_string(uidx)});
    int ord2 = rotation_order(*all[pair.second]);
    for (int r = 0; r < ord2; ++r)
      cat->morphisms_.push_back(FieldMorphism{
          pair.second, uidx,
          compose(u.inj2, rotation_automorphism(all[pair.second], r)),
          "inj2rot" + std::to_string(r) + "_u" + std::to_string(uidx)});
  }
  return cat;
}

std::shared_ptr<const FieldCategory> FieldCategory::from_json(
    const nlohmann::json& j) {
  std::vector<SpacetimePtr> objects;
  for (const auto& oj : j.at("objects")) objects.push_back(Spacetime::from_json(oj));
  std::vector<int> shifts = j.value("shifts", std::vector<int>{1});
  std::vector<std::pair<int, int>> unions;
  if (j.contains("unions"))
    for (const auto& u : j.at("unions"))
      unions.emplace_back(u.at(0).get<int>(), u.at(1).get<int>());
  return make(std::move(objects), std::move(shifts), unions);
}

TestFunction FieldCategory::gauge_action(int object_index, int mu,
                                         const TestFunction& f) const {
  const auto& m = objects_.at(object_index).spacetime;
  int k = shift_powers_.at(mu);
  Embedding plus = rotation_automorphism(m, k);
  Embedding minus = rotation_automorphism(m, -k);
  TestFunction out = zero_function(m);
  for (int i = 0; i < m->site_count(); ++i) {
    out.values[plus.site_map[i]] += f.values[i];
    out.values[minus.site_map[i]] -= f.values[i];
  }
  return out;
}

bool FieldCategory::gauge_equivariant(std::string* witness) const {
  for (const auto& mor : morphisms_) {
    const auto& src = objects_.at(mor.source).spacetime;
    for (int mu = 0; mu < gauge_dim(); ++mu) {
      for (int i = 0; i < src->site_count(); ++i) {
        TestFunction f = delta_function(src, src->site_at(i));
        TestFunction lhs_src = gauge_action(mor.source, mu, f);
        TestFunction lhs = zero_function(objects_.at(mor.target).spacetime);
        for (int s = 0; s < src->site_count(); ++s)
          lhs.values[mor.embedding.site_map[s]] += lhs_src.values[s];
        TestFunction pushed = zero_function(objects_.at(mor.target).spacetime);
        pushed.values[mor.embedding.site_map[i]] = 1;
        TestFunction rhs = gauge_action(mor.target, mu, pushed);
        if (!(lhs.values == rhs.values)) {
          if (witness)
            *witness = "gauge action does not commute with " + mor.label;
          return false;
        }
      }
    }
  }
  return true;
}

FieldValue value_pushforward(const FieldCategory& cat, const FieldMorphism& mor,
                             const FieldValue& v) {
  const auto& target = cat.object(mor.target).spacetime;
  const auto& cols = morphism_class_matrix_cached(mor.embedding);
  FieldValue out(target, v.gauge_dim());
  for (const auto& [key, a] : v.terms()) {
    Observable pushed = morphism_action(mor.embedding, a);
    // Expand each antifield generator through the class pushforward.
    std::vector<std::pair<FieldKey, Rational>> words{{FieldKey{{}, key.ghost}, Rational(1)}};
    for (uint32_t k : key.anti) {
      std::vector<std::pair<FieldKey, Rational>> next;
      for (const auto& [w, coef] : words) {
        for (size_t m2 = 0; m2 < cols[k].size(); ++m2) {
          if (sgn(cols[k][m2]) == 0) continue;
          FieldKey nw = w;
          int sign = 1;
          if (!insert_fermionic(nw.anti, static_cast<uint32_t>(m2), sign)) continue;
          // The new generator entered from the right of the current word.
          int cross = (nw.ghost.size() % 2 == 0) ? 1 : -1;
          // ghosts sit after antifields; crossing them happens only in the
          // canonical reordering already handled by insert position, and the
          // ghost word is untouched, so only the anti insertions sign.
          (void)cross;
          next.emplace_back(std::move(nw), coef * cols[k][m2] * Rational(sign));
        }
      }
      words = std::move(next);
    }
    for (const auto& [w, coef] : words)
      out.add_term(w, pushed.scaled(RC(coef)));
  }
  return out;
}

namespace {

Observable observable_shift_derivation(const FieldCategory& cat, int obj_idx,
                                       int mu, const Observable& a) {
  const auto& rho = cat.object(obj_idx).rho_hat.at(mu);
  const auto& m = cat.object(obj_idx).spacetime;
  int dim = static_cast<int>(rho.size());
  // Mapped generator G(k) = phi(-rho e_k).
  std::vector<Observable> mapped;
  mapped.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    Observable g(m);
    for (int r = 0; r < dim; ++r)
      if (sgn(rho[r][k]) != 0)
        g.add_term({static_cast<uint32_t>(r)}, RC(-rho[r][k]));
    mapped.push_back(std::move(g));
  }
  Observable out = Observable::zero(m);
  for (const auto& [mono, c] : a.terms()) {
    for (size_t pos = 0; pos < mono.size(); ++pos) {
      Observable term = Observable::scalar(m, c);
      for (size_t i = 0; i < mono.size(); ++i) {
        if (i == pos)
          term = term * mapped[mono[i]];
        else {
          Observable g(m);
          g.add_term({mono[i]}, RC(Rational(1)));
          term = term * g;
        }
      }
      out = out + term;
    }
  }
  return out;
}

}  // namespace

FieldValue value_brst(const FieldCategory& cat, int object_index,
                      const FieldValue& v) {
  const auto& obj = cat.object(object_index);
  FieldValue out(obj.spacetime, v.gauge_dim());
  for (const auto& [key, a] : v.terms()) {
    for (int mu = 0; mu < cat.gauge_dim(); ++mu) {
      // Observable slot: derivation value times a ghost created just right
      // of the observable; it crosses the whole antifield word.
      {
        Observable da = observable_shift_derivation(cat, object_index, mu, a);
        if (!da.is_zero()) {
          FieldKey nk = key;
          int s_insert = 1;
          if (insert_fermionic(nk.ghost, static_cast<uint8_t>(mu), s_insert)) {
            int cross = (key.anti.size() % 2 == 0) ? 1 : -1;
            out.add_term(nk, da.scaled(RC(Rational(s_insert * cross))));
          }
        }
      }
      // Antifield slots: ad(e_k) -> ad(-rho e_k) c^mu with the derivation
      // prefix sign; the ghost crosses the antifield suffix.
      const auto& rho = obj.rho_hat.at(mu);
      for (size_t idx = 0; idx < key.anti.size(); ++idx) {
        uint32_t k = key.anti[idx];
        for (size_t r = 0; r < rho.size(); ++r) {
          if (sgn(rho[r][k]) == 0) continue;
          FieldKey nk = key;
          nk.anti.erase(nk.anti.begin() + idx);
          int s_anti = 1;
          if (!insert_fermionic(nk.anti, static_cast<uint32_t>(r), s_anti)) continue;
          int s_ghost = 1;
          if (!insert_fermionic(nk.ghost, static_cast<uint8_t>(mu), s_ghost)) continue;
          int prefix = (idx % 2 == 0) ? 1 : -1;
          // The replacement ad_r stays at position idx (sign via insert),
          // and the fresh ghost crosses the antifields after idx.
          size_t suffix = key.anti.size() - idx - 1;
          int cross = (suffix % 2 == 0) ? 1 : -1;
          Rational sign(prefix * s_anti * s_ghost * cross);
          out.add_term(nk, a.scaled(RC(-rho[r][k] * sign)));
        }
      }
      // Ghost slots: abelian algebra, gamma(c) = 0.
    }
  }
  return out;
}

namespace {

std::vector<std::vector<int>> all_tuples(int slots, int range) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(slots, 0);
  while (true) {
    out.push_back(cur);
    int i = slots - 1;
    while (i >= 0 && ++cur[i] == range) cur[i--] = 0;
    if (i < 0) break;
  }
  if (slots == 0) out = {{}};
  return out;
}

}  // namespace

NaturalityReport check_naturality(const NatField& field) {
  const auto& cat = *field.category;
  for (const auto& mor : cat.morphisms()) {
    const auto& src = cat.object(mor.source).spacetime;
    for (const auto& tuple : all_tuples(field.arity, src->site_count())) {
      std::vector<TestFunction> fs;
      std::vector<TestFunction> pushed;
      for (int site : tuple) {
        fs.push_back(delta_function(src, src->site_at(site)));
        TestFunction p = zero_function(cat.object(mor.target).spacetime);
        p.values[mor.embedding.site_map[site]] = 1;
        pushed.push_back(p);
      }
      FieldValue lhs = value_pushforward(cat, mor, field.evaluate(mor.source, fs));
      FieldValue rhs = field.evaluate(mor.target, pushed);
      if (!(lhs == rhs)) {
        NaturalityReport rep;
        rep.natural = false;
        rep.morphism_label = mor.label;
        std::string sites;
        for (int s : tuple) sites += to_string(src->site_at(s));
        rep.detail = "naturality square fails under " + mor.label +
                     " at delta tuple " + sites;
        return rep;
      }
    }
  }
  NaturalityReport rep;
  rep.natural = true;
  return rep;
}

NatField field_product(const NatField& phi, const NatField& psi) {
  if (phi.category != psi.category)
    throw Error(ErrorCode::kSpacetimeMismatch, "fields from different categories");
  NatField out;
  out.category = phi.category;
  out.name = phi.name + "*" + psi.name;
  out.arity = phi.arity + psi.arity;
  out.ghost_number = phi.ghost_number + psi.ghost_number;
  int p = phi.arity, q = psi.arity;
  auto phi_eval = phi.evaluate;
  auto psi_eval = psi.evaluate;
  auto cat = phi.category;
  out.evaluate = [phi_eval, psi_eval, p, q, cat](
                     int obj, const std::vector<TestFunction>& fs) {
    Rational pf(1);
    for (int i = 2; i <= p; ++i) pf *= i;
    for (int i = 2; i <= q; ++i) pf *= i;
    std::vector<int> perm(p + q);
    for (int i = 0; i < p + q; ++i) perm[i] = i;
    FieldValue acc(cat->object(obj).spacetime, cat->gauge_dim());
    do {
      std::vector<TestFunction> left, right;
      for (int i = 0; i < p; ++i) left.push_back(fs[perm[i]]);
      for (int i = 0; i < q; ++i) right.push_back(fs[perm[p + i]]);
      acc = acc + phi_eval(obj, left) * psi_eval(obj, right);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc.scaled(RC(Rational(1) / pf));
  };
  return out;
}

NatField field_brst(const NatField& phi) {
  NatField out;
  out.category = phi.category;
  out.name = "s(" + phi.name + ")";
  out.arity = phi.arity;
  out.ghost_number = phi.ghost_number + 1;
  auto cat = phi.category;
  auto eval = phi.evaluate;
  int sign = (phi.ghost_number % 2 == 0) ? 1 : -1;
  out.evaluate = [cat, eval, sign](int obj, const std::vector<TestFunction>& fs) {
    FieldValue first = value_brst(*cat, obj, eval(obj, fs));
    FieldValue acc = first;
    for (size_t slot = 0; slot < fs.size(); ++slot) {
      for (int mu = 0; mu < cat->gauge_dim(); ++mu) {
        std::vector<TestFunction> moved = fs;
        moved[slot] = cat->gauge_action(obj, mu, fs[slot]);
        FieldValue term = eval(obj, moved) *
                          FieldValue::ghost(cat->object(obj).spacetime,
                                            cat->gauge_dim(), mu);
        acc = acc + term.scaled(RC(Rational(sign)));
      }
    }
    return acc;
  };
  return out;
}

namespace {

// Sparse encoding of all evaluations of a field over delta tuples, used by
// the exactness solver. Index space: (object, tuple, key, ccr monomial) x
// {re, im}.
struct ValueIndexer {
  std::map<std::tuple<int, int, FieldKey, Monomial>, int> index;
  int next = 0;

  int get(int obj, int tuple, const FieldKey& key, const Monomial& mono) {
    auto t = std::make_tuple(obj, tuple, key, mono);
    auto it = index.find(t);
    if (it != index.end()) return it->second;
    index.emplace(t, next);
    int id = next;
    next += 2;
    return id;
  }
};

SparseVec encode_field(const NatField& field, ValueIndexer& indexer) {
  const auto& cat = *field.category;
  std::map<int, Rational> acc;
  for (int obj = 0; obj < cat.object_count(); ++obj) {
    const auto& m = cat.object(obj).spacetime;
    auto tuples = all_tuples(field.arity, m->site_count());
    for (size_t ti = 0; ti < tuples.size(); ++ti) {
      std::vector<TestFunction> fs;
      for (int site : tuples[ti]) fs.push_back(delta_function(m, m->site_at(site)));
      FieldValue v = field.evaluate(obj, fs);
      for (const auto& [key, a] : v.terms())
        for (const auto& [mono, c] : a.terms()) {
          int base = indexer.get(obj, static_cast<int>(ti), key, mono);
          if (sgn(c.re) != 0) acc[base] += c.re;
          if (sgn(c.im) != 0) acc[base + 1] += c.im;
        }
    }
  }
  SparseVec out;
  for (const auto& [i, val] : acc)
    if (sgn(val) != 0) out.emplace_back(i, val);
  return out;
}

}  // namespace

std::vector<NatField> exactness_ansatz(const FieldCategoryPtr& cat, int arity,
                                       int max_shift_power) {
  std::vector<NatField> out;
  if (arity < 1) return out;
  // Antifield fields composed with powers of the gauge action on the first
  // slot, multiplied by linear fields in the remaining slots.
  for (int pw = 0; pw <= max_shift_power; ++pw) {
    NatField theta;
    theta.category = cat;
    theta.name = "theta_pow" + std::to_string(pw);
    theta.arity = arity;
    theta.ghost_number = -1;
    theta.evaluate = [cat, pw](int obj, const std::vector<TestFunction>& fs) {
      const auto& m = cat->object(obj).spacetime;
      TestFunction f = fs.at(0);
      for (int rep = 0; rep < pw; ++rep) f = cat->gauge_action(obj, 0, f);
      FieldValue v = FieldValue::antifield(m, cat->gauge_dim(), class_of(f));
      for (size_t slot = 1; slot < fs.size(); ++slot)
        v = v * FieldValue::from_observable(smeared_field(fs[slot]), cat->gauge_dim());
      return v;
    };
    out.push_back(std::move(theta));
  }
  return out;
}

std::vector<ProbeEntry> field_cohomology_probe(const std::vector<NatField>& candidates,
                                               int ansatz_shift_powers) {
  std::vector<ProbeEntry> out;
  for (const auto& cand : candidates) {
    ProbeEntry entry;
    entry.name = cand.name;
    NatField s_cand = field_brst(cand);

    // Closedness: all evaluations of s(cand) vanish.
    ValueIndexer closed_indexer;
    entry.closed = sparse_is_zero(encode_field(s_cand, closed_indexer));

    if (!entry.closed) {
      entry.exact = false;
      out.push_back(std::move(entry));
      continue;
    }
    auto ansatz = exactness_ansatz(cand.category, cand.arity, ansatz_shift_powers);
    if (ansatz.empty()) {
      entry.decidable = false;
      entry.detail = "no ghost-number -1 ansatz fields at this arity";
      out.push_back(std::move(entry));
      continue;
    }
    ValueIndexer indexer;
    TrackedEchelon echelon;
    int tag = 0;
    for (const auto& theta : ansatz)
      echelon.insert(encode_field(field_brst(theta), indexer), tag++);
    auto combo = echelon.try_represent(encode_field(cand, indexer));
    entry.exact = combo.has_value();
    if (entry.exact) {
      std::string terms;
      for (const auto& [j, c] : *combo)
        terms += (terms.empty() ? "" : " + ") + to_string(c) + "*s(" +
                 ansatz[j].name + ")";
      entry.detail = "= " + terms;
    } else {
      entry.detail = "not in the span of s(antifield ansatz), powers 0.." +
                     std::to_string(ansatz_shift_powers);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

NatField candidate_from_json(const FieldCategoryPtr& cat, const nlohmann::json& j) {
  NatField field;
  field.category = cat;
  field.name = j.at("name").get<std::string>();
  field.arity = j.at("arity").get<int>();
  field.ghost_number = j.value("ghost_number", 0);
  struct Factor {
    std::string type;
    int slot = 0;
    int power = 1;
    int shift_power = 0;
    int t = 0, x = 0;
  };
  struct Term {
    Rational coeff;
    std::vector<Factor> factors;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  for (const auto& tj : j.at("terms")) {
    Term term;
    if (tj.at("coeff").is_number_integer())
      term.coeff = rat(tj.at("coeff").get<long>());
    else {
      auto r = parse_rational(tj.at("coeff").get<std::string>());
      if (!r) throw Error(ErrorCode::kParse, "bad candidate coefficient");
      term.coeff = *r;
    }
    for (const auto& fj : tj.at("factors")) {
      Factor f;
      f.type = fj.at("type").get<std::string>();
      f.slot = fj.value("slot", 0);
      f.power = fj.value("power", 1);
      f.shift_power = fj.value("shift_power", 0);
      f.t = fj.value("t", 0);
      f.x = fj.value("x", 0);
      if (f.slot < 0 || f.slot >= field.arity)
        throw Error(ErrorCode::kSchemaViolation, "factor slot out of range");
      term.factors.push_back(f);
    }
    terms->push_back(std::move(term));
  }
  int arity = field.arity;
  field.evaluate = [cat, terms, arity](int obj,
                                       const std::vector<TestFunction>& fs) {
    if (static_cast<int>(fs.size()) != arity)
      throw Error(ErrorCode::kInvalidArgument, "wrong number of slots");
    const auto& m = cat->object(obj).spacetime;
    FieldValue acc(m, cat->gauge_dim());
    for (const auto& term : *terms) {
      FieldValue prod = FieldValue::from_observable(
          Observable::scalar(m, RC(term.coeff)), cat->gauge_dim());
      for (const auto& f : term.factors) {
        TestFunction slot_fn = fs.at(f.slot);
        for (int rep = 0; rep < f.shift_power; ++rep)
          slot_fn = cat->gauge_action(obj, 0, slot_fn);
        FieldValue factor(m, cat->gauge_dim());
        if (f.type == "phi_slot") {
          factor = FieldValue::from_observable(smeared_field(slot_fn),
                                               cat->gauge_dim());
        } else if (f.type == "sum_slot") {
          Rational total(0);
          for (const auto& v : slot_fn.values) total += v;
          factor = FieldValue::from_observable(
              Observable::scalar(m, RC(total)), cat->gauge_dim());
        } else if (f.type == "site_density") {
          Observable dens = Observable::zero(m);
          for (int i = 0; i < m->site_count(); ++i) {
            if (sgn(slot_fn.values[i]) == 0) continue;
            Observable phi_x = smeared_field(delta_function(m, m->site_at(i)));
            Observable powed = Observable::unit(m);
            for (int p2 = 0; p2 < f.power; ++p2) powed = powed * phi_x;
            dens = dens + powed.scaled(RC(slot_fn.values[i]));
          }
          factor = FieldValue::from_observable(dens, cat->gauge_dim());
        } else if (f.type == "fixed_site") {
          Site site{0, f.t, f.x};
          Observable phi_p = smeared_field(delta_function(m, site));
          factor = FieldValue::from_observable(
              phi_p.scaled(RC(slot_fn.values[m->index_of(site)])),
              cat->gauge_dim());
        } else if (f.type == "antifield_slot") {
          factor = FieldValue::antifield(m, cat->gauge_dim(), class_of(slot_fn));
        } else {
          throw Error(ErrorCode::kSchemaViolation,
                      "unknown candidate factor type: " + f.type);
        }
        prod = prod * factor;
      }
      acc = acc + prod;
    }
    return acc;
  };
  return field;
}

}  // namespace lcqft
