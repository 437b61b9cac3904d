#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lcqft/green.hpp"
#include "lcqft/lattice.hpp"

namespace lcqft {

// The canonical generator space of one spacetime: a smearing function enters
// observables only through the two Cauchy-data rows of its causal propagator
// image, so generator classes live in Q^{2 n_x} per component. Basis
// generator k corresponds to (component, row in {0,1}, x).
struct ClassSpace {
  static int dimension(const Spacetime& m);
  static int index(const Spacetime& m, int comp, int row, int x);
  // (comp,row,x) of a basis index.
  static void decode(const Spacetime& m, int k, int& comp, int& row, int& x);
};

// Cauchy data (rows 0 and 1) of E f; the canonical form of f modulo the
// field-equation ideal.
std::vector<Rational> class_of(const TestFunction& f);

// Canonical representative supported on rows {0,1} whose class is `data`.
TestFunction representative(const SpacetimePtr& m,
                            const std::vector<Rational>& data);

// The symplectic pairing in the canonical basis; equals <f, E g> for any
// representatives (exactly).
Rational sigma_standard(const Spacetime& m, const std::vector<Rational>& a,
                        const std::vector<Rational>& b);

// Pairing of two basis generators: +-1 on conjugate pairs, else 0.
Rational sigma_basis(const Spacetime& m, int j, int k);

using Monomial = std::vector<uint32_t>;  // sorted basis indices

// Element of the polynomial *-algebra of the free field on one spacetime.
// Terms are normal-ordered monomials in basis generators; the map is the
// unique normal form, so equality of observables is equality of term maps.
class Observable {
 public:
  explicit Observable(SpacetimePtr m) : spacetime_(std::move(m)) {}

  static Observable scalar(SpacetimePtr m, RC c);
  static Observable unit(SpacetimePtr m) { return scalar(std::move(m), RC(Rational(1))); }
  static Observable zero(SpacetimePtr m) { return Observable(std::move(m)); }
  static Observable generator(SpacetimePtr m, int k);

  const SpacetimePtr& spacetime() const { return spacetime_; }
  const std::map<Monomial, RC>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_scalar() const;
  RC scalar_part() const;
  int degree() const;

  void add_term(const Monomial& mono, const RC& c);

  Observable operator+(const Observable& o) const;
  Observable operator-(const Observable& o) const;
  Observable operator*(const Observable& o) const;  // normal-ordered product
  Observable scaled(const RC& c) const;
  Observable adjoint() const;

  bool operator==(const Observable& o) const;

  std::string to_string() const;

 private:
  SpacetimePtr spacetime_;
  std::map<Monomial, RC> terms_;
};

Observable commutator(const Observable& a, const Observable& b);

// phi(f): the degree-1 observable of the smeared field. Linear in f and
// zero exactly on the field-equation ideal.
Observable smeared_field(const TestFunction& f);

// Pushforward matrix of an embedding on generator classes, as columns.
std::vector<std::vector<Rational>> morphism_class_matrix(const Embedding& chi);

// Cached variant; also remembers the admissibility verdict.
const std::vector<std::vector<Rational>>& morphism_class_matrix_cached(
    const Embedding& chi);

// alpha_chi: unital injective homomorphism induced by an admissible
// embedding. Throws when chi is not admissible.
Observable morphism_action(const Embedding& chi, const Observable& a);

// Observable-level timeslice reduction: same canonical form, smearing
// functions supported inside the slab.
Observable timeslice_reduce_observable(const Observable& a, const CauchySlab& slab);

struct TensorFactorization {
  SpacetimePtr m1;
  SpacetimePtr m2;
  // A = sum_i factors[i].first (x) factors[i].second, coefficients folded
  // into the first factor.
  std::vector<std::pair<Observable, Observable>> factors;
};

// Exhibits A(M1 u M2) = A(M1) (x) A(M2) on normal forms. Requires exactly
// two components.
TensorFactorization tensor_split(const Observable& a);

// Inverse direction: A1 (x) A2 as an observable on the disjoint union.
Observable tensor_embed(const Observable& a1, const Observable& a2,
                        const SpacetimePtr& union_spacetime);

}  // namespace lcqft
