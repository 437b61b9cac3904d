#pragma once

#include <map>
#include <string>
#include <vector>

#include "lcqft/rational.hpp"

#include <nlohmann/json.hpp>

namespace lcqft {

using ExpVec = std::vector<int>;

// Multivariate polynomial with rational coefficients over a fixed number of
// variables x_1..x_n.
class Poly {
 public:
  explicit Poly(int nvars) : nvars_(nvars) {}
  static Poly constant(int nvars, const Rational& c);
  static Poly variable(int nvars, int i);
  static Poly monomial(int nvars, const ExpVec& e, const Rational& c);

  int nvars() const { return nvars_; }
  const std::map<ExpVec, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add_term(const ExpVec& e, const Rational& c);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const Rational& c) const;
  Poly partial(int i) const;

  bool operator==(const Poly& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }

  std::string to_string() const;

  static Poly from_json(const nlohmann::json& j, int nvars);
  nlohmann::json to_json() const;

 private:
  int nvars_;
  std::map<ExpVec, Rational> terms_;
};

// Polynomial vector field sum_i comps[i] d/dx_i.
struct VectorField {
  std::vector<Poly> comps;

  int nvars() const { return static_cast<int>(comps.size()); }
  int max_coeff_degree() const;
};

// v(p) = sum_i v_i dp/dx_i.
Poly apply_vector_field(const VectorField& v, const Poly& p);

// [v, w]_i = v(w_i) - w(v_i).
VectorField vf_commutator(const VectorField& v, const VectorField& w);

}  // namespace lcqft
