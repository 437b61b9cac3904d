#include "lcqft/ccr.hpp"

#include <algorithm>
#include <mutex>

#include "lcqft/exact_linalg.hpp"

namespace lcqft {

int ClassSpace::dimension(const Spacetime& m) {
  int d = 0;
  for (const auto& c : m.components()) d += 2 * c.n_x;
  return d;
}

int ClassSpace::index(const Spacetime& m, int comp, int row, int x) {
  int off = 0;
  for (int c = 0; c < comp; ++c) off += 2 * m.component(c).n_x;
  return off + row * m.component(comp).n_x + x;
}

void ClassSpace::decode(const Spacetime& m, int k, int& comp, int& row, int& x) {
  for (int c = 0; c < m.component_count(); ++c) {
    int block = 2 * m.component(c).n_x;
    if (k < block) {
      comp = c;
      row = k / m.component(c).n_x;
      x = k % m.component(c).n_x;
      return;
    }
    k -= block;
  }
  throw Error(ErrorCode::kInvalidArgument, "generator index out of range");
}

std::vector<Rational> class_of(const TestFunction& f) {
  const auto& m = *f.spacetime;
  TestFunction u = causal_propagator(f);
  std::vector<Rational> data(ClassSpace::dimension(m), Rational(0));
  for (int c = 0; c < m.component_count(); ++c) {
    const auto& comp = m.component(c);
    int off = m.component_offset(c);
    for (int x = 0; x < comp.n_x; ++x) {
      data[ClassSpace::index(m, c, 0, x)] = u.values[off + comp.idx(0, x)];
      data[ClassSpace::index(m, c, 1, x)] = u.values[off + comp.idx(1, x)];
    }
  }
  return data;
}

TestFunction representative(const SpacetimePtr& m,
                            const std::vector<Rational>& data) {
  if (static_cast<int>(data.size()) != ClassSpace::dimension(*m))
    throw Error(ErrorCode::kInvalidArgument, "class data has wrong dimension");
  TestFunction f = zero_function(m);
  for (int c = 0; c < m->component_count(); ++c) {
    const auto& comp = m->component(c);
    int off = m->component_offset(c);
    for (int x = 0; x < comp.n_x; ++x) {
      // f(0,.) = a_1, f(1,.) = -a_0 reproduces Cauchy data (a_0, a_1).
      f.values[off + comp.idx(0, x)] = data[ClassSpace::index(*m, c, 1, x)];
      f.values[off + comp.idx(1, x)] = -data[ClassSpace::index(*m, c, 0, x)];
    }
  }
  return f;
}

Rational sigma_standard(const Spacetime& m, const std::vector<Rational>& a,
                        const std::vector<Rational>& b) {
  Rational s(0);
  for (int c = 0; c < m.component_count(); ++c) {
    const auto& comp = m.component(c);
    for (int x = 0; x < comp.n_x; ++x) {
      const Rational& a0 = a[ClassSpace::index(m, c, 0, x)];
      const Rational& a1 = a[ClassSpace::index(m, c, 1, x)];
      const Rational& b0 = b[ClassSpace::index(m, c, 0, x)];
      const Rational& b1 = b[ClassSpace::index(m, c, 1, x)];
      s += a1 * b0 - a0 * b1;
    }
  }
  return s;
}

Rational sigma_basis(const Spacetime& m, int j, int k) {
  int cj, rj, xj, ck, rk, xk;
  ClassSpace::decode(m, j, cj, rj, xj);
  ClassSpace::decode(m, k, ck, rk, xk);
  if (cj != ck || xj != xk || rj == rk) return Rational(0);
  // sigma(row0, row1) = -1 at the same site.
  return rj == 0 ? Rational(-1) : Rational(1);
}

Observable Observable::scalar(SpacetimePtr m, RC c) {
  Observable o(std::move(m));
  o.add_term({}, c);
  return o;
}

Observable Observable::generator(SpacetimePtr m, int k) {
  Observable o(std::move(m));
  o.add_term({static_cast<uint32_t>(k)}, RC(Rational(1)));
  return o;
}

bool Observable::is_scalar() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

RC Observable::scalar_part() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? RC() : it->second;
}

int Observable::degree() const {
  int d = 0;
  for (const auto& [mono, c] : terms_) d = std::max(d, static_cast<int>(mono.size()));
  return d;
}

void Observable::add_term(const Monomial& mono, const RC& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(mono);
  if (it == terms_.end()) {
    terms_.emplace(mono, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Observable Observable::operator+(const Observable& o) const {
  if (!spacetime_->same_as(*o.spacetime_))
    throw Error(ErrorCode::kSpacetimeMismatch, "observables on different spacetimes");
  Observable out = *this;
  for (const auto& [mono, c] : o.terms_) out.add_term(mono, c);
  return out;
}

Observable Observable::operator-(const Observable& o) const {
  return *this + o.scaled(RC(Rational(-1)));
}

Observable Observable::scaled(const RC& c) const {
  Observable out(spacetime_);
  if (c.is_zero()) return out;
  for (const auto& [mono, v] : terms_) out.add_term(mono, v * c);
  return out;
}

namespace {

// Normal-orders an arbitrary word of generators using the central rule
// [phi_j, phi_k] = i sigma(j,k). Words are short; the recursion is fine.
void normal_order_word(const Spacetime& m, const std::vector<uint32_t>& word,
                       const RC& coef, std::map<Monomial, RC>& out) {
  for (size_t i = 0; i + 1 < word.size(); ++i) {
    if (word[i] > word[i + 1]) {
      Rational s = sigma_basis(m, static_cast<int>(word[i]),
                               static_cast<int>(word[i + 1]));
      std::vector<uint32_t> swapped = word;
      std::swap(swapped[i], swapped[i + 1]);
      normal_order_word(m, swapped, coef, out);
      if (sgn(s) != 0) {
        std::vector<uint32_t> contracted;
        contracted.reserve(word.size() - 2);
        for (size_t j = 0; j < word.size(); ++j)
          if (j != i && j != i + 1) contracted.push_back(word[j]);
        normal_order_word(m, contracted, coef * RC::i_times(s), out);
      }
      return;
    }
  }
  auto it = out.find(word);
  if (it == out.end()) {
    if (!coef.is_zero()) out.emplace(word, coef);
  } else {
    it->second += coef;
    if (it->second.is_zero()) out.erase(it);
  }
}

}  // namespace

Observable Observable::operator*(const Observable& o) const {
  if (!spacetime_->same_as(*o.spacetime_))
    throw Error(ErrorCode::kSpacetimeMismatch, "observables on different spacetimes");
  Observable out(spacetime_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      std::vector<uint32_t> word;
      word.reserve(ma.size() + mb.size());
      word.insert(word.end(), ma.begin(), ma.end());
      word.insert(word.end(), mb.begin(), mb.end());
      normal_order_word(*spacetime_, word, ca * cb, out.terms_);
    }
  return out;
}

Observable Observable::adjoint() const {
  Observable out(spacetime_);
  for (const auto& [mono, c] : terms_) {
    std::vector<uint32_t> rev(mono.rbegin(), mono.rend());
    normal_order_word(*spacetime_, rev, c.conj(), out.terms_);
  }
  return out;
}

bool Observable::operator==(const Observable& o) const {
  return spacetime_->same_as(*o.spacetime_) && terms_ == o.terms_;
}

std::string Observable::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [mono, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += "(" + lcqft::to_string(c) + ")";
    for (uint32_t k : mono) s += "*phi[" + std::to_string(k) + "]";
  }
  return s;
}

Observable commutator(const Observable& a, const Observable& b) {
  return a * b - b * a;
}

Observable smeared_field(const TestFunction& f) {
  std::vector<Rational> data = class_of(f);
  Observable o(f.spacetime);
  for (size_t k = 0; k < data.size(); ++k)
    if (sgn(data[k]) != 0)
      o.add_term({static_cast<uint32_t>(k)}, RC(data[k]));
  return o;
}

std::vector<std::vector<Rational>> morphism_class_matrix(const Embedding& chi) {
  const auto& n = *chi.source;
  int dn = ClassSpace::dimension(n);
  std::vector<std::vector<Rational>> cols(dn);
  for (int k = 0; k < dn; ++k) {
    std::vector<Rational> data(dn, Rational(0));
    data[k] = 1;
    TestFunction rep = representative(chi.source, data);
    TestFunction pushed = zero_function(chi.target);
    for (int i = 0; i < n.site_count(); ++i)
      pushed.values[chi.site_map[i]] = rep.values[i];
    cols[k] = class_of(pushed);
  }
  return cols;
}

namespace {

// Admissibility and the class pushforward are pure functions of the map
// data; remember them so repeated functor applications of one embedding stay
// cheap. Keys keep the spacetimes alive, which makes the pointer identity
// stable. Idempotent population behind a mutex.
struct EmbeddingKey {
  SpacetimePtr src;
  SpacetimePtr tgt;
  std::vector<int> map;
  bool operator<(const EmbeddingKey& o) const {
    if (src.get() != o.src.get()) return src.get() < o.src.get();
    if (tgt.get() != o.tgt.get()) return tgt.get() < o.tgt.get();
    return map < o.map;
  }
};

struct EmbeddingData {
  bool admissible = false;
  std::string clause;
  std::vector<std::vector<Rational>> class_matrix;
};

std::mutex g_embedding_cache_mutex;
std::map<EmbeddingKey, EmbeddingData> g_embedding_cache;

const EmbeddingData& embedding_data(const Embedding& chi) {
  std::lock_guard<std::mutex> lock(g_embedding_cache_mutex);
  EmbeddingKey key{chi.source, chi.target, chi.site_map};
  auto it = g_embedding_cache.find(key);
  if (it == g_embedding_cache.end()) {
    EmbeddingData data;
    AdmissibilityReport rep = check_admissible(chi);
    data.admissible = rep.admissible;
    data.clause = rep.violated_clause;
    data.class_matrix = morphism_class_matrix(chi);
    it = g_embedding_cache.emplace(std::move(key), std::move(data)).first;
  }
  return it->second;
}

bool admissible_cached(const Embedding& chi, std::string* clause) {
  const EmbeddingData& data = embedding_data(chi);
  if (clause) *clause = data.clause;
  return data.admissible;
}

}  // namespace

const std::vector<std::vector<Rational>>& morphism_class_matrix_cached(
    const Embedding& chi) {
  return embedding_data(chi).class_matrix;
}

Observable morphism_action(const Embedding& chi, const Observable& a) {
  if (!a.spacetime()->same_as(*chi.source))
    throw Error(ErrorCode::kSpacetimeMismatch, "observable not on the source");
  std::string clause;
  if (!admissible_cached(chi, &clause))
    throw Error(ErrorCode::kNotAdmissible, "embedding not admissible: " + clause);
  const auto& cols = embedding_data(chi).class_matrix;
  int dm = ClassSpace::dimension(*chi.target);
  std::vector<Observable> mapped_generator;
  mapped_generator.reserve(cols.size());
  for (const auto& col : cols) {
    Observable g(chi.target);
    for (int mIdx = 0; mIdx < dm; ++mIdx)
      if (sgn(col[mIdx]) != 0)
        g.add_term({static_cast<uint32_t>(mIdx)}, RC(col[mIdx]));
    mapped_generator.push_back(std::move(g));
  }
  Observable out = Observable::zero(chi.target);
  for (const auto& [mono, c] : a.terms()) {
    Observable term = Observable::scalar(chi.target, c);
    for (uint32_t k : mono) term = term * mapped_generator.at(k);
    out = out + term;
  }
  return out;
}

Observable timeslice_reduce_observable(const Observable& a,
                                       const CauchySlab& slab) {
  if (!a.spacetime()->same_as(*slab.spacetime))
    throw Error(ErrorCode::kSpacetimeMismatch, "slab on another spacetime");
  Observable out = Observable::zero(a.spacetime());
  for (const auto& [mono, c] : a.terms()) {
    Observable term = Observable::scalar(a.spacetime(), c);
    for (uint32_t k : mono) {
      std::vector<Rational> data(ClassSpace::dimension(*a.spacetime()), Rational(0));
      data[k] = 1;
      TestFunction f = representative(a.spacetime(), data);
      TestFunction reduced = timeslice_reduce(f, slab);
      term = term * smeared_field(reduced);
    }
    out = out + term;
  }
  return out;
}

TensorFactorization tensor_split(const Observable& a) {
  const auto& m = *a.spacetime();
  if (m.component_count() != 2)
    throw Error(ErrorCode::kInvalidArgument,
                "tensor_split wants exactly two components");
  TensorFactorization out;
  out.m1 = Spacetime::create({m.component(0)});
  out.m2 = Spacetime::create({m.component(1)});
  int d1 = ClassSpace::dimension(*out.m1);
  std::map<std::pair<Monomial, Monomial>, RC> split;
  for (const auto& [mono, c] : a.terms()) {
    Monomial m1part, m2part;
    for (uint32_t k : mono) {
      if (static_cast<int>(k) < d1)
        m1part.push_back(k);
      else
        m2part.push_back(k - d1);
    }
    auto key = std::make_pair(m1part, m2part);
    auto it = split.find(key);
    if (it == split.end())
      split.emplace(key, c);
    else
      it->second += c;
  }
  for (const auto& [key, c] : split) {
    if (c.is_zero()) continue;
    Observable a1(out.m1);
    a1.add_term(key.first, c);
    Observable a2(out.m2);
    a2.add_term(key.second, RC(Rational(1)));
    out.factors.emplace_back(std::move(a1), std::move(a2));
  }
  return out;
}

Observable tensor_embed(const Observable& a1, const Observable& a2,
                        const SpacetimePtr& union_spacetime) {
  const auto& m = *union_spacetime;
  if (m.component_count() != 2)
    throw Error(ErrorCode::kInvalidArgument, "union must have two components");
  int d1 = ClassSpace::dimension(*a1.spacetime());
  Observable out = Observable::zero(union_spacetime);
  for (const auto& [m1, c1] : a1.terms())
    for (const auto& [m2, c2] : a2.terms()) {
      Monomial mono = m1;
      for (uint32_t k : m2) mono.push_back(k + d1);
      out.add_term(mono, c1 * c2);
    }
  return out;
}

}  // namespace lcqft
