#include "lcqft/bv.hpp"

#include <algorithm>
#include <functional>

#include "lcqft/exact_linalg.hpp"
#include "lcqft/graded.hpp"
#include "lcqft/lattice.hpp"

namespace lcqft {

namespace {

Rational json_rational(const nlohmann::json& j) {
  if (j.is_number_integer()) return rat(j.get<long>());
  if (j.is_string()) {
    auto r = parse_rational(j.get<std::string>());
    if (r) return *r;
  }
  throw Error(ErrorCode::kParse, "expected integer or \"p/q\" rational");
}

}  // namespace

std::shared_ptr<const GaugeModel> GaugeModel::from_json(const nlohmann::json& j) {
  auto model = std::make_shared<GaugeModel>();
  model->config_dim = j.at("config_dim").get<int>();
  model->gauge_dim = j.at("gauge_dim").get<int>();
  if (model->config_dim < 1 || model->gauge_dim < 0)
    throw Error(ErrorCode::kParse, "model needs config_dim >= 1 and gauge_dim >= 0");
  int n = model->config_dim, m = model->gauge_dim;

  model->structure.assign(
      m, std::vector<std::vector<Rational>>(m, std::vector<Rational>(m, Rational(0))));
  if (j.contains("structure_constants")) {
    for (const auto& entry : j.at("structure_constants")) {
      // [c, a, b, value] for f^c_{ab}
      int c = entry.at(0).get<int>(), a = entry.at(1).get<int>(),
          b = entry.at(2).get<int>();
      model->structure.at(c).at(a).at(b) = json_rational(entry.at(3));
    }
  }

  if (j.contains("rho_matrices")) {
    for (const auto& mat : j.at("rho_matrices")) {
      VectorField v;
      for (int i = 0; i < n; ++i) {
        Poly comp(n);
        for (int k = 0; k < n; ++k) {
          Rational coef = json_rational(mat.at(i).at(k));
          if (sgn(coef) != 0) comp = comp + Poly::variable(n, k).scaled(coef);
        }
        v.comps.push_back(comp);
      }
      model->rho.push_back(std::move(v));
    }
  } else if (j.contains("rho_polynomials")) {
    for (const auto& gen : j.at("rho_polynomials")) {
      VectorField v;
      for (const auto& comp : gen) v.comps.push_back(Poly::from_json(comp, n));
      if (static_cast<int>(v.comps.size()) != n)
        throw Error(ErrorCode::kParse, "rho generator needs config_dim components");
      model->rho.push_back(std::move(v));
    }
  } else {
    throw Error(ErrorCode::kParse, "model needs rho_matrices or rho_polynomials");
  }
  if (static_cast<int>(model->rho.size()) != m)
    throw Error(ErrorCode::kParse, "rho needs gauge_dim generators");

  model->action = Poly::from_json(j.at("action"), n);
  model->name = j.value("name", "");
  return model;
}

std::string GaugeModel::check_antisymmetry() const {
  for (int c = 0; c < gauge_dim; ++c)
    for (int a = 0; a < gauge_dim; ++a)
      for (int b = 0; b < gauge_dim; ++b)
        if (structure[c][a][b] != -structure[c][b][a])
          return "structure constants not antisymmetric at (" +
                 std::to_string(c) + "," + std::to_string(a) + "," +
                 std::to_string(b) + ")";
  return "";
}

std::string GaugeModel::check_jacobi() const {
  for (int a = 0; a < gauge_dim; ++a)
    for (int b = 0; b < gauge_dim; ++b)
      for (int c = 0; c < gauge_dim; ++c)
        for (int e = 0; e < gauge_dim; ++e) {
          Rational sum(0);
          for (int d = 0; d < gauge_dim; ++d) {
            sum += structure[d][a][b] * structure[e][d][c];
            sum += structure[d][b][c] * structure[e][d][a];
            sum += structure[d][c][a] * structure[e][d][b];
          }
          if (sgn(sum) != 0)
            return "Jacobi identity fails at (" + std::to_string(a) + "," +
                   std::to_string(b) + "," + std::to_string(c) + ")";
        }
  return "";
}

std::string GaugeModel::check_morphism() const {
  for (int a = 0; a < gauge_dim; ++a)
    for (int b = 0; b < gauge_dim; ++b) {
      VectorField lhs = vf_commutator(rho[a], rho[b]);
      for (int i = 0; i < config_dim; ++i) {
        Poly rhs(config_dim);
        for (int c = 0; c < gauge_dim; ++c)
          rhs = rhs + rho[c].comps[i].scaled(structure[c][a][b]);
        if (!(lhs.comps[i] == rhs))
          return "rho is not a Lie algebra morphism at generators (" +
                 std::to_string(a) + "," + std::to_string(b) + ")";
      }
    }
  return "";
}

std::string GaugeModel::check_invariance() const {
  for (int a = 0; a < gauge_dim; ++a)
    if (!apply_vector_field(rho[a], action).is_zero())
      return "action is not invariant under generator " + std::to_string(a) +
             ": rho_" + std::to_string(a) +
             "(S) = " + apply_vector_field(rho[a], action).to_string();
  return "";
}

std::string GaugeModel::first_violation() const {
  std::string v = check_antisymmetry();
  if (!v.empty()) return v;
  v = check_jacobi();
  if (!v.empty()) return v;
  v = check_morphism();
  if (!v.empty()) return v;
  return check_invariance();
}

GradedElement GradedElement::unit(GaugeModelPtr model) {
  GradedElement u(std::move(model));
  BvMonomial m;
  m.xexp.assign(u.model_->config_dim, 0);
  u.add_term(m, Rational(1));
  return u;
}

GradedElement GradedElement::from_poly(GaugeModelPtr model, const Poly& p) {
  GradedElement u(std::move(model));
  for (const auto& [e, c] : p.terms()) {
    BvMonomial m;
    m.xexp = e;
    u.add_term(m, c);
  }
  return u;
}

GradedElement GradedElement::coordinate(GaugeModelPtr model, int i) {
  return from_poly(model, Poly::variable(model->config_dim, i));
}

GradedElement GradedElement::ghost(GaugeModelPtr model, int a) {
  GradedElement u(std::move(model));
  BvMonomial m;
  m.xexp.assign(u.model_->config_dim, 0);
  m.ghost.push_back(static_cast<uint8_t>(a));
  u.add_term(m, Rational(1));
  return u;
}

GradedElement GradedElement::antifield(GaugeModelPtr model, int i) {
  GradedElement u(std::move(model));
  BvMonomial m;
  m.xexp.assign(u.model_->config_dim, 0);
  m.anti.push_back(static_cast<uint8_t>(i));
  u.add_term(m, Rational(1));
  return u;
}

GradedElement GradedElement::ghost_antifield(GaugeModelPtr model, int a) {
  GradedElement u(std::move(model));
  BvMonomial m;
  m.xexp.assign(u.model_->config_dim, 0);
  m.b.push_back(static_cast<uint8_t>(a));
  u.add_term(m, Rational(1));
  return u;
}

GradedElement GradedElement::component(int ghost_number) const {
  GradedElement out(model_);
  for (const auto& [m, c] : terms_)
    if (m.ghost_number() == ghost_number) out.add_term(m, c);
  return out;
}

bool GradedElement::homogeneous(int* ghost_number) const {
  bool first = true;
  int g = 0;
  for (const auto& [m, c] : terms_) {
    if (first) {
      g = m.ghost_number();
      first = false;
    } else if (m.ghost_number() != g) {
      return false;
    }
  }
  if (ghost_number && !first) *ghost_number = g;
  return true;
}

void GradedElement::add_term(const BvMonomial& mono, const Rational& c) {
  if (sgn(c) == 0) return;
  auto it = terms_.find(mono);
  if (it == terms_.end()) {
    terms_.emplace(mono, c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

GradedElement GradedElement::operator+(const GradedElement& o) const {
  GradedElement out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

GradedElement GradedElement::operator-(const GradedElement& o) const {
  return *this + o.scaled(Rational(-1));
}

GradedElement GradedElement::scaled(const Rational& c) const {
  GradedElement out(model_);
  if (sgn(c) == 0) return out;
  for (const auto& [m, v] : terms_) out.add_term(m, v * c);
  return out;
}

std::string GradedElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += "(" + lcqft::to_string(c) + ")";
    for (uint8_t a : m.b) s += "*b" + std::to_string(a + 1);
    for (size_t i = 0; i < m.xexp.size(); ++i)
      if (m.xexp[i] > 0) {
        s += "*x" + std::to_string(i + 1);
        if (m.xexp[i] > 1) s += "^" + std::to_string(m.xexp[i]);
      }
    for (uint8_t i : m.anti) s += "*xd" + std::to_string(i + 1);
    for (uint8_t a : m.ghost) s += "*c" + std::to_string(a + 1);
  }
  return s;
}

GradedElement graded_multiply(const GradedElement& u, const GradedElement& v) {
  if (u.model().get() != v.model().get())
    throw Error(ErrorCode::kSpacetimeMismatch, "graded elements from different models");
  GradedElement out(u.model());
  for (const auto& [ma, ca] : u.terms())
    for (const auto& [mb, cb] : v.terms()) {
      BvMonomial m;
      m.b.reserve(ma.b.size() + mb.b.size());
      std::merge(ma.b.begin(), ma.b.end(), mb.b.begin(), mb.b.end(),
                 std::back_inserter(m.b));
      m.xexp.resize(ma.xexp.size());
      for (size_t i = 0; i < m.xexp.size(); ++i)
        m.xexp[i] = ma.xexp[i] + mb.xexp[i];
      // Word [A.anti][A.ghost][B.anti][B.ghost]: move B.anti past A.ghost.
      int sign = (ma.ghost.size() * mb.anti.size()) % 2 == 0 ? 1 : -1;
      int s1 = 1, s2 = 1;
      if (!merge_fermionic(ma.anti, mb.anti, m.anti, s1)) continue;
      if (!merge_fermionic(ma.ghost, mb.ghost, m.ghost, s2)) continue;
      out.add_term(m, ca * cb * Rational(sign * s1 * s2));
    }
  return out;
}

namespace {

enum class Diff { kGamma, kDelta };

// Rule elements of the differentials on single generators.
GradedElement rule_on_coordinate_part(Diff d, const GaugeModelPtr& model,
                                      const Poly& xpart) {
  GradedElement out(model);
  if (d == Diff::kDelta) return out;
  for (int a = 0; a < model->gauge_dim; ++a) {
    Poly moved = apply_vector_field(model->rho[a], xpart);
    if (moved.is_zero()) continue;
    out = out + graded_multiply(GradedElement::ghost(model, a),
                                GradedElement::from_poly(model, moved));
  }
  return out;
}

GradedElement rule_on_antifield(Diff d, const GaugeModelPtr& model, int i) {
  GradedElement out(model);
  if (d == Diff::kDelta) {
    return GradedElement::from_poly(model, model->action.partial(i));
  }
  // gamma x'_i = - sum_{a,j} c^a (d v_{a,j} / d x_i) x'_j
  for (int a = 0; a < model->gauge_dim; ++a)
    for (int j = 0; j < model->config_dim; ++j) {
      Poly coef = model->rho[a].comps[j].partial(i);
      if (coef.is_zero()) continue;
      GradedElement term = graded_multiply(
          GradedElement::ghost(model, a),
          graded_multiply(GradedElement::from_poly(model, coef),
                          GradedElement::antifield(model, j)));
      out = out - term;
    }
  return out;
}

GradedElement rule_on_ghost(Diff d, const GaugeModelPtr& model, int a) {
  GradedElement out(model);
  if (d == Diff::kDelta) return out;
  // gamma c^a = -1/2 f^a_{bc} c^b c^c = - sum_{b<c} f^a_{bc} c^b c^c.
  for (int b = 0; b < model->gauge_dim; ++b)
    for (int c = b + 1; c < model->gauge_dim; ++c) {
      const Rational& f = model->structure[a][b][c];
      if (sgn(f) == 0) continue;
      out = out - graded_multiply(GradedElement::ghost(model, b),
                                  GradedElement::ghost(model, c))
                      .scaled(f);
    }
  return out;
}

GradedElement rule_on_ghost_antifield(Diff d, const GaugeModelPtr& model, int a) {
  GradedElement out(model);
  if (d == Diff::kDelta) {
    // delta b_a = sum_i v_{a,i} x'_i: the gauge vector field as an antifield.
    for (int i = 0; i < model->config_dim; ++i) {
      if (model->rho[a].comps[i].is_zero()) continue;
      out = out +
            graded_multiply(GradedElement::from_poly(model, model->rho[a].comps[i]),
                            GradedElement::antifield(model, i));
    }
    return out;
  }
  // gamma b_a = sum_{b,c} f^c_{ba} c^b b_c (adjoint action).
  for (int b = 0; b < model->gauge_dim; ++b)
    for (int c = 0; c < model->gauge_dim; ++c) {
      const Rational& f = model->structure[c][b][a];
      if (sgn(f) == 0) continue;
      out = out + graded_multiply(GradedElement::ghost(model, b),
                                  GradedElement::ghost_antifield(model, c))
                      .scaled(f);
    }
  return out;
}

GradedElement apply_diff(Diff d, const GradedElement& u) {
  const GaugeModelPtr& model = u.model();
  GradedElement out(model);
  for (const auto& [mono, coef] : u.terms()) {
    // Factor order: [b ...][x-part][anti ...][ghost ...]; the differential is
    // an odd left derivation, so each slot carries the parity of the odd
    // factors before it.
    auto rest_elem = [&](const BvMonomial& m) {
      GradedElement e(model);
      e.add_term(m, Rational(1));
      return e;
    };

    for (size_t idx = 0; idx < mono.b.size(); ++idx) {
      GradedElement rule = rule_on_ghost_antifield(d, model, mono.b[idx]);
      if (rule.is_zero()) continue;
      BvMonomial rest = mono;
      rest.b.erase(rest.b.begin() + idx);
      out = out + graded_multiply(rule, rest_elem(rest)).scaled(coef);
    }

    {
      Poly xpart(model->config_dim);
      xpart.add_term(mono.xexp, Rational(1));
      GradedElement rule = rule_on_coordinate_part(d, model, xpart);
      if (!rule.is_zero()) {
        BvMonomial rest = mono;
        rest.xexp.assign(model->config_dim, 0);
        out = out + graded_multiply(rule, rest_elem(rest)).scaled(coef);
      }
    }

    for (size_t idx = 0; idx < mono.anti.size(); ++idx) {
      GradedElement rule = rule_on_antifield(d, model, mono.anti[idx]);
      if (rule.is_zero()) continue;
      BvMonomial rest = mono;
      rest.anti.erase(rest.anti.begin() + idx);
      Rational sign = (idx % 2 == 0) ? Rational(1) : Rational(-1);
      out = out + graded_multiply(rule, rest_elem(rest)).scaled(coef * sign);
    }

    for (size_t idx = 0; idx < mono.ghost.size(); ++idx) {
      GradedElement rule = rule_on_ghost(d, model, mono.ghost[idx]);
      if (rule.is_zero()) continue;
      BvMonomial rest = mono;
      rest.ghost.erase(rest.ghost.begin() + idx);
      Rational sign =
          ((mono.anti.size() + idx) % 2 == 0) ? Rational(1) : Rational(-1);
      out = out + graded_multiply(rule, rest_elem(rest)).scaled(coef * sign);
    }
  }
  return out;
}

}  // namespace

GradedElement apply_gamma(const GradedElement& u) {
  return apply_diff(Diff::kGamma, u);
}

GradedElement apply_delta(const GradedElement& u) {
  return apply_diff(Diff::kDelta, u);
}

GradedElement apply_s(const GradedElement& u) {
  return apply_delta(u) + apply_gamma(u);
}

int s_degree_raise(const GaugeModel& model) {
  int r = 0;
  r = std::max(r, model.action.degree() - 1);  // delta on antifields
  for (const auto& v : model.rho) {
    r = std::max(r, v.max_coeff_degree());      // delta on ghost-antifields
    r = std::max(r, v.max_coeff_degree() - 1);  // gamma on x and antifields
  }
  return r;
}

std::vector<BvMonomial> enumerate_monomials(const GaugeModel& model,
                                            int ghost_number, int max_degree) {
  std::vector<BvMonomial> out;
  int n = model.config_dim, m = model.gauge_dim;

  std::vector<ExpVec> xmonos;
  ExpVec cur(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == n) {
      xmonos.push_back(cur);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      cur[pos] = e;
      rec(pos + 1, remaining - e);
    }
    cur[pos] = 0;
  };
  rec(0, max_degree);

  std::vector<std::vector<uint8_t>> subsets_anti, subsets_ghost;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<uint8_t> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.push_back(static_cast<uint8_t>(i));
    subsets_anti.push_back(std::move(s));
  }
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<uint8_t> s;
    for (int i = 0; i < m; ++i)
      if (mask & (1 << i)) s.push_back(static_cast<uint8_t>(i));
    subsets_ghost.push_back(std::move(s));
  }

  // b-multisets by size.
  std::function<std::vector<std::vector<uint8_t>>(int)> multisets = [&](int size) {
    std::vector<std::vector<uint8_t>> res;
    std::vector<uint8_t> ms;
    std::function<void(int, int)> rec2 = [&](int start, int left) {
      if (left == 0) {
        res.push_back(ms);
        return;
      }
      for (int a = start; a < m; ++a) {
        ms.push_back(static_cast<uint8_t>(a));
        rec2(a, left - 1);
        ms.pop_back();
      }
    };
    rec2(0, size);
    return res;
  };

  for (const auto& anti : subsets_anti)
    for (const auto& ghost : subsets_ghost) {
      int need = static_cast<int>(ghost.size()) - static_cast<int>(anti.size()) -
                 ghost_number;
      if (need < 0 || need % 2 != 0) continue;
      int nb = need / 2;
      for (const auto& b : multisets(nb))
        for (const auto& xe : xmonos) {
          BvMonomial mono;
          mono.b = b;
          mono.anti = anti;
          mono.ghost = ghost;
          mono.xexp = xe;
          out.push_back(std::move(mono));
        }
    }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

SparseVec encode(const GradedElement& e, const std::map<BvMonomial, int>& index,
                 bool* all_found) {
  std::vector<std::pair<int, Rational>> entries;
  *all_found = true;
  for (const auto& [m, c] : e.terms()) {
    auto it = index.find(m);
    if (it == index.end()) {
      *all_found = false;
      continue;
    }
    entries.emplace_back(it->second, c);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return entries;
}

}  // namespace

CohomologyResult cohomology(const GaugeModelPtr& model, int ghost_number,
                            int max_degree) {
  CohomologyResult res;
  res.window_degree = max_degree;
  int r = s_degree_raise(*model);
  res.enlarged_degree = max_degree + r;

  std::vector<BvMonomial> window =
      enumerate_monomials(*model, ghost_number, max_degree);
  std::map<BvMonomial, int> window_index;
  for (size_t i = 0; i < window.size(); ++i)
    window_index[window[i]] = static_cast<int>(i);

  // Targets at ghost number k+1 up to the enlarged degree.
  std::vector<BvMonomial> target =
      enumerate_monomials(*model, ghost_number + 1, res.enlarged_degree);
  std::map<BvMonomial, int> target_index;
  for (size_t i = 0; i < target.size(); ++i)
    target_index[target[i]] = static_cast<int>(i);

  std::vector<SparseVec> columns;
  columns.reserve(window.size());
  for (const auto& mono : window) {
    GradedElement e(model);
    e.add_term(mono, Rational(1));
    bool ok = true;
    columns.push_back(encode(apply_s(e), target_index, &ok));
    if (!ok)
      throw Error(ErrorCode::kTruncationInconsistent,
                  "s image leaves the enlarged degree window");
  }
  std::vector<SparseVec> kernel = kernel_of(columns);
  res.kernel_dimension = static_cast<int>(kernel.size());

  // Image of s from ghost number k-1 intersected with the window: sources
  // whose out-of-window image components cancel contribute their in-window
  // parts.
  std::vector<BvMonomial> below =
      enumerate_monomials(*model, ghost_number - 1, max_degree);
  std::vector<BvMonomial> mid =
      enumerate_monomials(*model, ghost_number, res.enlarged_degree);
  std::map<BvMonomial, int> out_index;
  int next_out = 0;
  for (const auto& m : mid)
    if (!window_index.count(m)) out_index[m] = next_out++;

  std::vector<SparseVec> in_parts, out_parts;
  for (const auto& mono : below) {
    GradedElement e(model);
    e.add_term(mono, Rational(1));
    GradedElement img = apply_s(e);
    SparseVec in_vec, out_vec;
    for (const auto& [m, c] : img.terms()) {
      auto it = window_index.find(m);
      if (it != window_index.end()) {
        in_vec.emplace_back(it->second, c);
      } else {
        auto ot = out_index.find(m);
        if (ot == out_index.end())
          throw Error(ErrorCode::kTruncationInconsistent,
                      "s image leaves the enlarged degree window");
        out_vec.emplace_back(ot->second, c);
      }
    }
    auto by_index = [](const auto& a, const auto& b) { return a.first < b.first; };
    std::sort(in_vec.begin(), in_vec.end(), by_index);
    std::sort(out_vec.begin(), out_vec.end(), by_index);
    in_parts.push_back(std::move(in_vec));
    out_parts.push_back(std::move(out_vec));
  }

  TrackedEchelon image_echelon;
  {
    TrackedEchelon out_echelon;
    for (size_t j = 0; j < out_parts.size(); ++j) {
      auto dep = out_echelon.insert(out_parts[j], static_cast<int>(j));
      if (!dep) continue;
      SparseVec img;
      for (const auto& [src, coef] : *dep)
        img = sparse_axpy(img, coef, in_parts[src]);
      if (image_echelon.insert_untracked(img)) ++res.image_dimension;
    }
  }

  res.dimension = res.kernel_dimension - res.image_dimension;

  // Representatives: kernel vectors independent of the image.
  TrackedEchelon rep_echelon = image_echelon;
  for (const auto& k : kernel) {
    if (static_cast<int>(res.representatives.size()) >= 8) break;
    SparseVec reduced = rep_echelon.reduce(k);
    if (sparse_is_zero(reduced)) continue;
    rep_echelon.insert_untracked(reduced);
    GradedElement rep(model);
    for (const auto& [idx, c] : k) rep.add_term(window[idx], c);
    res.representatives.push_back(std::move(rep));
  }
  return res;
}

bool gauge_cohomology_trivial_low_degrees(const GaugeModel& model) {
  int m = model.gauge_dim;
  if (m == 0) return true;
  // d1: g* -> Lambda^2 g*, (d xi)(a,b) = -xi([a,b]).
  std::vector<SparseVec> d1_cols;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) pairs.emplace_back(a, b);
  for (int e = 0; e < m; ++e) {
    SparseVec col;
    for (size_t p = 0; p < pairs.size(); ++p) {
      auto [a, b] = pairs[p];
      const Rational& f = model.structure[e][a][b];
      if (sgn(f) != 0) col.emplace_back(static_cast<int>(p), -f);
    }
    d1_cols.push_back(std::move(col));
  }
  int rank_d1 = rank_of(d1_cols);
  int h1 = m - rank_d1 - 0;  // ker(d1) dim = m - rank(d1); image into degree 1 is 0
  if (h1 != 0) return false;
  // d2: Lambda^2 g* -> Lambda^3 g*.
  std::vector<std::tuple<int, int, int>> triples;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c) triples.emplace_back(a, b, c);
  auto pair_index = [&](int a, int b, int* sign) {
    *sign = 1;
    if (a > b) {
      std::swap(a, b);
      *sign = -1;
    }
    for (size_t p = 0; p < pairs.size(); ++p)
      if (pairs[p] == std::make_pair(a, b)) return static_cast<int>(p);
    return -1;
  };
  std::vector<SparseVec> d2_cols;
  for (size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    std::map<int, Rational> acc;
    for (size_t t = 0; t < triples.size(); ++t) {
      auto [a, b, c] = triples[t];
      Rational v(0);
      // (d om)(a,b,c) = -om([a,b],c) + om([a,c],b) - om([b,c],a)
      auto term = [&](int u, int w, int z, int outer_sign) {
        for (int e = 0; e < m; ++e) {
          const Rational& f = model.structure[e][u][w];
          if (sgn(f) == 0) continue;
          int s2 = 1;
          // om = basis 2-form dual to pairs[p]: om(e, z) with e<z ordering sign
          if (e == z) continue;
          int idx = pair_index(e, z, &s2);
          if (idx == static_cast<int>(p)) v += Rational(outer_sign * s2) * f;
        }
      };
      term(a, b, c, -1);
      term(a, c, b, 1);
      term(b, c, a, -1);
      if (sgn(v) != 0) acc[static_cast<int>(t)] = v;
    }
    SparseVec col;
    for (auto& [i2, v2] : acc) col.emplace_back(i2, v2);
    d2_cols.push_back(std::move(col));
  }
  int rank_d2 = rank_of(d2_cols);
  int ker_d2 = static_cast<int>(pairs.size()) - rank_d2;
  int h2 = ker_d2 - rank_d1;
  return h2 == 0;
}

int invariant_oracle_dimension(const GaugeModel& model, int max_degree) {
  int n = model.config_dim;
  std::vector<ExpVec> monos;
  ExpVec cur(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == n) {
      monos.push_back(cur);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      cur[pos] = e;
      rec(pos + 1, remaining - e);
    }
    cur[pos] = 0;
  };
  rec(0, max_degree);
  std::map<ExpVec, int> mono_index;
  for (size_t i = 0; i < monos.size(); ++i)
    mono_index[monos[i]] = static_cast<int>(i);
  int dim = static_cast<int>(monos.size());

  auto poly_to_sparse = [&](const Poly& p, int block) {
    SparseVec v;
    for (const auto& [e, c] : p.terms()) {
      auto it = mono_index.find(e);
      if (it == mono_index.end())
        throw Error(ErrorCode::kInternal, "oracle degree overflow");
      v.emplace_back(block * dim + it->second, c);
    }
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  };

  // Invariant subspace: kernel of the stacked gauge actions. The action can
  // raise degree for nonlinear rho, so stack into an enlarged block space.
  int action_deg = 0;
  for (const auto& v : model.rho) action_deg = std::max(action_deg, v.max_coeff_degree());
  std::vector<ExpVec> big_monos;
  ExpVec cur2(n, 0);
  std::function<void(int, int)> rec2 = [&](int pos, int remaining) {
    if (pos == n) {
      big_monos.push_back(cur2);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      cur2[pos] = e;
      rec2(pos + 1, remaining - e);
    }
    cur2[pos] = 0;
  };
  rec2(0, max_degree + std::max(0, action_deg - 1));
  std::map<ExpVec, int> big_index;
  for (size_t i = 0; i < big_monos.size(); ++i)
    big_index[big_monos[i]] = static_cast<int>(i);
  int big_dim = static_cast<int>(big_monos.size());

  std::vector<SparseVec> action_columns;
  for (const auto& e : monos) {
    Poly p = Poly::monomial(n, e, Rational(1));
    SparseVec stacked;
    for (int a = 0; a < model.gauge_dim; ++a) {
      Poly moved = apply_vector_field(model.rho[a], p);
      for (const auto& [me, c] : moved.terms())
        stacked.emplace_back(a * big_dim + big_index.at(me), c);
    }
    std::sort(stacked.begin(), stacked.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    action_columns.push_back(std::move(stacked));
  }
  std::vector<SparseVec> invariants = kernel_of(action_columns);

  // Ideal generated by the partials of S, truncated to the window.
  std::vector<SparseVec> ideal;
  for (int i = 0; i < n; ++i) {
    Poly dS = model.action.partial(i);
    if (dS.is_zero()) continue;
    for (const auto& e : monos) {
      Poly prod = dS * Poly::monomial(n, e, Rational(1));
      if (prod.degree() > max_degree || prod.is_zero()) continue;
      ideal.push_back(poly_to_sparse(prod, 0));
    }
  }

  int rank_inv = static_cast<int>(invariants.size());
  int rank_ideal = rank_of(ideal);
  TrackedEchelon both;
  for (const auto& v : invariants) both.insert_untracked(v);
  for (const auto& v : ideal) both.insert_untracked(v);
  int rank_union = both.rank();
  int rank_intersection = rank_inv + rank_ideal - rank_union;
  return rank_inv - rank_intersection;
}

}  // namespace lcqft
