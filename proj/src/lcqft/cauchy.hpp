#pragma once

#include <string>
#include <vector>

#include "lcqft/ccr.hpp"

namespace lcqft {

// A compatible family of slab-local observables over a nested chain of
// neighborhoods of a Cauchy slab; the concrete realization of the projective
// limit algebra at desk scale.
struct CauchyGerm {
  SpacetimePtr m;
  CauchySlab anchor;
  std::vector<CauchySlab> chain;            // outermost first, anchor last
  std::vector<SpacetimePtr> local_objects;  // slab subspacetimes
  std::vector<Embedding> inclusions;        // local object -> m
  std::vector<Observable> data;             // one local observable per slab
};

// Maximal nested chain around `anchor` with at most `depth` slabs.
std::vector<CauchySlab> nested_slab_chain(const CauchySlab& anchor, int depth);

CauchyGerm germ_from_observable(const Observable& a, const CauchySlab& anchor,
                                int depth = 3);

// Eq-style compatibility: pushing the component on a smaller slab into a
// larger one reproduces the component there. Returns false with a witness
// description on failure.
bool germ_compatible(const CauchyGerm& g, std::string* witness = nullptr);

// Includes the germ back into the full algebra through its outermost slab.
Observable germ_include(const CauchyGerm& g);

CauchyGerm propagate(const CauchyGerm& g, const CauchySlab& to, int depth = 3);

bool germ_equal(const CauchyGerm& a, const CauchyGerm& b);

// Compactly supported change of the background coefficients between two
// Cauchy slabs.
struct BackgroundPerturbation {
  SpacetimePtr base;                      // single-component spacetime
  std::vector<Rational> delta_mass_sq;    // per site
  std::vector<Rational> delta_coupling;   // per edge (t,x); empty when absent
  CauchySlab slab_minus;                  // past neighborhood N-
  CauchySlab slab_plus;                   // future neighborhood N+
};

bool perturbation_is_mass_type(const BackgroundPerturbation& k);
void validate_perturbation(const BackgroundPerturbation& k);

// base with coefficients shifted by s * kappa.
SpacetimePtr perturbed_spacetime(const BackgroundPerturbation& k,
                                 const Rational& s = Rational(1));

// K = P_perturbed - P_base applied to a smearing function (linear in kappa).
TestFunction apply_kappa(const BackgroundPerturbation& k, const TestFunction& g);

// The four-step class map behind the relative Cauchy evolution: reduce into
// N+ with base dynamics, reinterpret on the perturbed spacetime, reduce into
// N- there, reinterpret back.
std::vector<Rational> rce_class_map(const BackgroundPerturbation& k,
                                    const std::vector<Rational>& data,
                                    const Rational& s = Rational(1));

// beta_kappa as an automorphism of the observable algebra of the base.
Observable rce_automorphism(const BackgroundPerturbation& k, const Observable& a);

// d/ds beta_{s kappa}(phi(f)) at s = 0 by exact first-order perturbation of
// the Green operators.
Observable rce_derivative(const BackgroundPerturbation& k, const TestFunction& f);

// Central finite-difference quotient of the automorphism at step s, exact.
Observable rce_fd_quotient(const BackgroundPerturbation& k, const TestFunction& f,
                           const Rational& s);

// i [T_kappa, phi(f)] with T_kappa = 1/2 sum_z kappa(z) phi(delta_z)^2.
// Mass-type perturbations only.
Observable stress_energy_commutator(const BackgroundPerturbation& k,
                                    const TestFunction& f);

// Global sign relating the two derivative routes:
//   rce_derivative = kRceCommutatorSign * stress_energy_commutator.
inline constexpr int kRceCommutatorSign = -1;

// The derivative packaged as the obstruction to background independence;
// nonzero for the pure matter theory.
Observable background_independence_residual(const BackgroundPerturbation& k,
                                            const TestFunction& f);

}  // namespace lcqft
