#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lcqft/poly.hpp"

namespace lcqft {

// Finite-dimensional toy gauge model: polynomial action S on Q^n, a Lie
// algebra with rational structure constants acting by polynomial vector
// fields rho(e_a) that leave S invariant.
struct GaugeModel {
  int config_dim = 0;
  int gauge_dim = 0;
  // f[c][a][b] = f^c_{ab} with [rho_a, rho_b] = f^c_{ab} rho_c.
  std::vector<std::vector<std::vector<Rational>>> structure;
  Poly action{0};
  std::vector<VectorField> rho;
  std::string name;

  static std::shared_ptr<const GaugeModel> from_json(const nlohmann::json& j);

  // Each check returns an empty string when it holds, else a description.
  std::string check_antisymmetry() const;
  std::string check_jacobi() const;
  std::string check_morphism() const;
  std::string check_invariance() const;
  std::string first_violation() const;
};

using GaugeModelPtr = std::shared_ptr<const GaugeModel>;

// Canonical monomial of the minimal-sector graded algebra:
//   [ghost-antifields, bosonic, gh -2] [x-polynomial, gh 0]
//   [antifields, fermionic, gh -1] [ghosts, fermionic, gh +1].
struct BvMonomial {
  std::vector<uint8_t> b;      // sorted, repetitions allowed
  std::vector<uint8_t> anti;   // strictly increasing
  std::vector<uint8_t> ghost;  // strictly increasing
  ExpVec xexp;

  int ghost_number() const {
    return static_cast<int>(ghost.size()) - static_cast<int>(anti.size()) -
           2 * static_cast<int>(b.size());
  }
  int parity() const {
    return static_cast<int>((anti.size() + ghost.size()) % 2);
  }
  int xdegree() const {
    int d = 0;
    for (int e : xexp) d += e;
    return d;
  }
  auto operator<=>(const BvMonomial&) const = default;
};

class GradedElement {
 public:
  explicit GradedElement(GaugeModelPtr model) : model_(std::move(model)) {}

  static GradedElement unit(GaugeModelPtr model);
  static GradedElement from_poly(GaugeModelPtr model, const Poly& p);
  static GradedElement coordinate(GaugeModelPtr model, int i);
  static GradedElement ghost(GaugeModelPtr model, int a);
  static GradedElement antifield(GaugeModelPtr model, int i);
  static GradedElement ghost_antifield(GaugeModelPtr model, int a);

  const GaugeModelPtr& model() const { return model_; }
  const std::map<BvMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Monomials of mixed ghost number are allowed; homogeneous extraction:
  GradedElement component(int ghost_number) const;
  bool homogeneous(int* ghost_number) const;

  void add_term(const BvMonomial& mono, const Rational& c);

  GradedElement operator+(const GradedElement& o) const;
  GradedElement operator-(const GradedElement& o) const;
  GradedElement scaled(const Rational& c) const;

  bool operator==(const GradedElement& o) const {
    return terms_ == o.terms_;
  }

  std::string to_string() const;

 private:
  GaugeModelPtr model_;
  std::map<BvMonomial, Rational> terms_;
};

// Graded-commutative product with Koszul signs from the fermionic factors.
GradedElement graded_multiply(const GradedElement& u, const GradedElement& v);

// Chevalley-Eilenberg differential of the gauge action.
GradedElement apply_gamma(const GradedElement& u);
// Koszul-Tate differential of the action.
GradedElement apply_delta(const GradedElement& u);
// s = delta + gamma.
GradedElement apply_s(const GradedElement& u);

// Maximal x-degree raise of one application of s.
int s_degree_raise(const GaugeModel& model);

struct CohomologyResult {
  int dimension = 0;
  int kernel_dimension = 0;
  int image_dimension = 0;
  int window_degree = 0;           // requested x-degree window
  int enlarged_degree = 0;         // degree needed to hold s images exactly
  std::vector<GradedElement> representatives;
};

// dim H^k within the x-degree <= d window: closed elements of the window
// modulo image vectors that land entirely inside it. Exact ranks.
CohomologyResult cohomology(const GaugeModelPtr& model, int ghost_number,
                            int max_degree);

// Independent route for the acceptance comparison: invariant polynomials of
// degree <= d modulo the ideal generated by the partials of S. Uses only the
// gauge action and exact rank computations, none of the graded machinery.
int invariant_oracle_dimension(const GaugeModel& model, int max_degree);

// H^1 and H^2 of the gauge algebra with trivial coefficients both vanish.
// Exactly then the ghost-number-0 window is expected to consist of on-shell
// invariants alone; otherwise top-ghost classes enter (seen concretely for
// abelian algebras).
bool gauge_cohomology_trivial_low_degrees(const GaugeModel& model);

// All monomials of the given ghost number and x-degree window.
std::vector<BvMonomial> enumerate_monomials(const GaugeModel& model,
                                            int ghost_number, int max_degree);

}  // namespace lcqft
