#include "lcqft/poly.hpp"

#include <numeric>

#include "lcqft/lattice.hpp"

namespace lcqft {

Poly Poly::constant(int nvars, const Rational& c) {
  Poly p(nvars);
  p.add_term(ExpVec(nvars, 0), c);
  return p;
}

Poly Poly::variable(int nvars, int i) {
  Poly p(nvars);
  ExpVec e(nvars, 0);
  e.at(i) = 1;
  p.add_term(e, Rational(1));
  return p;
}

Poly Poly::monomial(int nvars, const ExpVec& e, const Rational& c) {
  Poly p(nvars);
  p.add_term(e, c);
  return p;
}

int Poly::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_)
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

void Poly::add_term(const ExpVec& e, const Rational& c) {
  if (sgn(c) == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

Poly Poly::operator-(const Poly& o) const { return *this + o.scaled(Rational(-1)); }

Poly Poly::operator*(const Poly& o) const {
  Poly out(nvars_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      ExpVec e(nvars_);
      for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

Poly Poly::scaled(const Rational& c) const {
  Poly out(nvars_);
  if (sgn(c) == 0) return out;
  for (const auto& [e, v] : terms_) out.add_term(e, v * c);
  return out;
}

Poly Poly::partial(int i) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    ExpVec d = e;
    d[i] -= 1;
    out.add_term(d, c * Rational(e[i]));
  }
  return out;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [e, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += lcqft::to_string(c);
    for (int i = 0; i < nvars_; ++i)
      if (e[i] > 0) {
        s += "*x" + std::to_string(i + 1);
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
      }
  }
  return s;
}

Poly Poly::from_json(const nlohmann::json& j, int nvars) {
  // Sparse monomial list: [[coeff, [e1, ..., en]], ...]
  Poly p(nvars);
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2)
      throw Error(ErrorCode::kParse, "polynomial term must be [coeff, exponents]");
    Rational c;
    if (term[0].is_number_integer())
      c = rat(term[0].get<long>());
    else if (term[0].is_string()) {
      auto r = parse_rational(term[0].get<std::string>());
      if (!r) throw Error(ErrorCode::kParse, "bad coefficient");
      c = *r;
    } else {
      throw Error(ErrorCode::kParse, "coefficient must be integer or \"p/q\"");
    }
    ExpVec e = term[1].get<ExpVec>();
    if (static_cast<int>(e.size()) != nvars)
      throw Error(ErrorCode::kParse, "exponent vector has wrong length");
    p.add_term(e, c);
  }
  return p;
}

nlohmann::json Poly::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [e, c] : terms_)
    out.push_back(nlohmann::json::array({lcqft::to_string(c), e}));
  return out;
}

int VectorField::max_coeff_degree() const {
  int d = 0;
  for (const auto& p : comps) d = std::max(d, p.degree());
  return d;
}

Poly apply_vector_field(const VectorField& v, const Poly& p) {
  Poly out(p.nvars());
  for (int i = 0; i < v.nvars(); ++i) out = out + v.comps[i] * p.partial(i);
  return out;
}

VectorField vf_commutator(const VectorField& v, const VectorField& w) {
  VectorField out;
  out.comps.reserve(v.comps.size());
  for (size_t i = 0; i < v.comps.size(); ++i)
    out.comps.push_back(apply_vector_field(v, w.comps[i]) -
                        apply_vector_field(w, v.comps[i]));
  return out;
}

}  // namespace lcqft
