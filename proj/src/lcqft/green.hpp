#pragma once

#include <vector>

#include "lcqft/lattice.hpp"
#include "lcqft/rational.hpp"

namespace lcqft {

// Compactly supported smearing function; on a finite lattice that is any
// site-indexed array of rationals.
struct TestFunction {
  SpacetimePtr spacetime;
  std::vector<Rational> values;

  bool is_zero() const {
    for (const auto& v : values)
      if (sgn(v) != 0) return false;
    return true;
  }
};

TestFunction zero_function(const SpacetimePtr& m);
TestFunction delta_function(const SpacetimePtr& m, const Site& s);
TestFunction add(const TestFunction& a, const TestFunction& b);
TestFunction scale(const Rational& c, const TestFunction& a);

// Support is confined to the time-interior rows 1..n_t-2 of every component;
// the field-equation ideal is generated by P applied to such functions.
bool time_interior_support(const TestFunction& f);

template <typename T>
T scalar_from_rational(const Rational& r);

// Discrete Klein-Gordon operator in divergence form, rows beyond the lattice
// treated as zero:
//   (P phi)(t,x) = phi(t+1,x) - 2 phi(t,x) + phi(t-1,x)
//                  - [ c(t,x) (phi(t,x+1) - phi(t,x))
//                      - c(t,x-1) (phi(t,x) - phi(t,x-1)) ]
//                  + m2(t,x) phi(t,x).
// For x-independent coupling this is the familiar c * (spatial Laplacian)
// stencil; the divergence form keeps P symmetric for arbitrary coefficients.
template <typename T>
std::vector<T> kg_apply_component(const Component& c, const std::vector<T>& phi);

// Retarded solve: unique u with u(0)=0, vanishing before the source, and
// (P u)(t) = f(t) for t = 0..n_t-2. The equation at the final row is a
// boundary artifact of the finite time range and is not imposed.
template <typename T>
std::vector<T> solve_retarded_component(const Component& c,
                                        const std::vector<T>& f);

// Advanced solve: mirror image, equations imposed at rows 1..n_t-1.
template <typename T>
std::vector<T> solve_advanced_component(const Component& c,
                                        const std::vector<T>& f);

template <typename T>
std::vector<T> causal_propagator_component(const Component& c,
                                           const std::vector<T>& f);

// Spacetime-level wrappers (componentwise, exact arithmetic).
TestFunction kg_apply(const TestFunction& f);
TestFunction green_retarded(const TestFunction& f);
TestFunction green_advanced(const TestFunction& f);
TestFunction causal_propagator(const TestFunction& f);  // E = E_ret - E_adv

// <f, g> = sum over sites of f*g.
Rational dot(const TestFunction& f, const TestFunction& g);
// <f, E g>; this pairing carries all commutators of the free field.
Rational pairing_E(const TestFunction& f, const TestFunction& g);

// Dense matrices for property tests and support checks.
using RationalMatrix = std::vector<std::vector<Rational>>;
RationalMatrix kg_matrix(const Component& c);
RationalMatrix green_retarded_matrix(const Component& c);
RationalMatrix green_advanced_matrix(const Component& c);
RationalMatrix causal_propagator_matrix(const Component& c);

// Replaces f by a representative with the same causal propagator image,
// supported on the two bottom rows of the slab:
//   f'(t_low)   = (E f)(t_low + 1)
//   f'(t_low+1) = -(E f)(t_low).
// This realizes the timeslice reduction; E f' = E f holds exactly.
TestFunction timeslice_reduce(const TestFunction& f, const CauchySlab& slab);

}  // namespace lcqft
