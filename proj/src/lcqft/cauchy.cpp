#include "lcqft/cauchy.hpp"

#include <algorithm>

namespace lcqft {

std::vector<CauchySlab> nested_slab_chain(const CauchySlab& anchor, int depth) {
  if (!slab_valid(anchor))
    throw Error(ErrorCode::kSlabTooThin, "anchor slab invalid");
  if (anchor.t_high - anchor.t_low + 1 < 3)
    throw Error(ErrorCode::kSlabTooThin,
                "germ anchor needs at least 3 rows so its neighborhoods are "
                "spacetimes of their own");
  int margin = 0;
  for (const auto& c : anchor.spacetime->components()) {
    int low_room = anchor.t_low - 1;
    int high_room = (c.n_t - 2) - anchor.t_high;
    margin = margin == 0 ? std::min(low_room, high_room)
                         : std::min({margin, low_room, high_room});
  }
  int steps = std::min(depth - 1, margin);
  std::vector<CauchySlab> chain;
  for (int j = steps; j >= 0; --j)
    chain.push_back(CauchySlab{anchor.spacetime, anchor.t_low - j,
                               anchor.t_high + j});
  return chain;
}

namespace {

// Inclusion of the subspacetime of a smaller slab into that of a larger one.
Embedding relative_slab_embedding(const SpacetimePtr& small_obj,
                                  const SpacetimePtr& big_obj, int dt) {
  Embedding e;
  e.source = small_obj;
  e.target = big_obj;
  e.site_map.resize(small_obj->site_count());
  for (int c = 0; c < small_obj->component_count(); ++c) {
    const auto& sc = small_obj->component(c);
    const auto& bc = big_obj->component(c);
    for (int t = 0; t < sc.n_t; ++t)
      for (int x = 0; x < sc.n_x; ++x)
        e.site_map[small_obj->component_offset(c) + sc.idx(t, x)] =
            big_obj->component_offset(c) + bc.idx(t + dt, x);
  }
  return e;
}

// Maps every generator of A(m) to an observable on the slab subspacetime by
// reducing its representative into the slab and pulling the rows back.
std::vector<Observable> slab_local_generators(const SpacetimePtr& m,
                                              const CauchySlab& slab,
                                              const SpacetimePtr& local) {
  int dim = ClassSpace::dimension(*m);
  std::vector<Observable> out;
  out.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    std::vector<Rational> data(dim, Rational(0));
    data[k] = 1;
    TestFunction f = representative(m, data);
    TestFunction reduced = timeslice_reduce(f, slab);
    TestFunction pulled = zero_function(local);
    for (int c = 0; c < local->component_count(); ++c) {
      const auto& lc = local->component(c);
      const auto& mc = m->component(c);
      for (int t = 0; t < lc.n_t; ++t)
        for (int x = 0; x < lc.n_x; ++x)
          pulled.values[local->component_offset(c) + lc.idx(t, x)] =
              reduced.values[m->component_offset(c) +
                             mc.idx(t + slab.t_low, x)];
    }
    out.push_back(smeared_field(pulled));
  }
  return out;
}

Observable through_generators(const Observable& a,
                              const std::vector<Observable>& gens,
                              const SpacetimePtr& target) {
  Observable out = Observable::zero(target);
  for (const auto& [mono, c] : a.terms()) {
    Observable term = Observable::scalar(target, c);
    for (uint32_t k : mono) term = term * gens.at(k);
    out = out + term;
  }
  return out;
}

}  // namespace

CauchyGerm germ_from_observable(const Observable& a, const CauchySlab& anchor,
                                int depth) {
  CauchyGerm g;
  g.m = a.spacetime();
  g.anchor = anchor;
  g.chain = nested_slab_chain(anchor, depth);
  for (const auto& slab : g.chain) {
    auto [local, incl] = slab_subspacetime(slab);
    auto gens = slab_local_generators(g.m, slab, local);
    g.data.push_back(through_generators(a, gens, local));
    g.local_objects.push_back(local);
    g.inclusions.push_back(incl);
  }
  return g;
}

bool germ_compatible(const CauchyGerm& g, std::string* witness) {
  for (size_t i = 0; i < g.chain.size(); ++i)
    for (size_t j = 0; j < g.chain.size(); ++j) {
      if (g.chain[j].t_low <= g.chain[i].t_low &&
          g.chain[i].t_high <= g.chain[j].t_high && i != j) {
        // chain[i] is the smaller slab; push its component into chain[j].
        Embedding rel = relative_slab_embedding(
            g.local_objects[i], g.local_objects[j],
            g.chain[i].t_low - g.chain[j].t_low);
        Observable pushed = morphism_action(rel, g.data[i]);
        if (!(pushed == g.data[j])) {
          if (witness)
            *witness = "germ component mismatch between slabs [" +
                       std::to_string(g.chain[i].t_low) + "," +
                       std::to_string(g.chain[i].t_high) + "] and [" +
                       std::to_string(g.chain[j].t_low) + "," +
                       std::to_string(g.chain[j].t_high) + "]";
          return false;
        }
      }
    }
  return true;
}

Observable germ_include(const CauchyGerm& g) {
  return morphism_action(g.inclusions.front(), g.data.front());
}

CauchyGerm propagate(const CauchyGerm& g, const CauchySlab& to, int depth) {
  Observable a = germ_include(g);
  return germ_from_observable(a, to, depth);
}

bool germ_equal(const CauchyGerm& a, const CauchyGerm& b) {
  if (a.chain.size() != b.chain.size()) return false;
  for (size_t i = 0; i < a.chain.size(); ++i) {
    if (a.chain[i].t_low != b.chain[i].t_low ||
        a.chain[i].t_high != b.chain[i].t_high)
      return false;
    if (!(a.data[i] == b.data[i])) return false;
  }
  return true;
}

bool perturbation_is_mass_type(const BackgroundPerturbation& k) {
  for (const auto& v : k.delta_coupling)
    if (sgn(v) != 0) return false;
  return true;
}

void validate_perturbation(const BackgroundPerturbation& k) {
  if (!k.base || k.base->component_count() != 1)
    throw Error(ErrorCode::kInvalidArgument,
                "perturbation wants a connected base spacetime");
  const auto& c = k.base->component(0);
  if (static_cast<int>(k.delta_mass_sq.size()) != c.sites())
    throw Error(ErrorCode::kInvalidArgument, "delta_mass_sq has wrong size");
  if (!k.delta_coupling.empty() &&
      static_cast<int>(k.delta_coupling.size()) != c.sites())
    throw Error(ErrorCode::kInvalidArgument, "delta_coupling has wrong size");
  if (!slab_valid(k.slab_minus) || !slab_valid(k.slab_plus))
    throw Error(ErrorCode::kSlabTooThin, "perturbation slabs too thin");
  if (!k.slab_minus.spacetime->same_as(*k.base) ||
      !k.slab_plus.spacetime->same_as(*k.base))
    throw Error(ErrorCode::kSpacetimeMismatch, "slabs not on the base spacetime");
  if (k.slab_minus.t_high >= k.slab_plus.t_low)
    throw Error(ErrorCode::kInvalidArgument,
                "slab_minus must lie strictly below slab_plus");
  for (int t = 0; t < c.n_t; ++t)
    for (int x = 0; x < c.n_x; ++x) {
      bool hit = sgn(k.delta_mass_sq[c.idx(t, x)]) != 0;
      if (!k.delta_coupling.empty() && sgn(k.delta_coupling[c.idx(t, x)]) != 0)
        hit = true;
      if (hit && !(t > k.slab_minus.t_high && t < k.slab_plus.t_low))
        throw Error(ErrorCode::kPerturbationNotBetweenSlabs,
                    "perturbation support must lie strictly between the slabs");
    }
}

SpacetimePtr perturbed_spacetime(const BackgroundPerturbation& k,
                                 const Rational& s) {
  const auto& c = k.base->component(0);
  Component pc = c;
  for (int i = 0; i < c.sites(); ++i) {
    pc.mass_sq[i] += s * k.delta_mass_sq[i];
    if (!k.delta_coupling.empty()) pc.coupling[i] += s * k.delta_coupling[i];
  }
  return Spacetime::create({pc});
}

TestFunction apply_kappa(const BackgroundPerturbation& k, const TestFunction& g) {
  const auto& c = k.base->component(0);
  TestFunction out = zero_function(g.spacetime);
  for (int t = 0; t < c.n_t; ++t)
    for (int x = 0; x < c.n_x; ++x) {
      Rational v = k.delta_mass_sq[c.idx(t, x)] * g.values[c.idx(t, x)];
      if (!k.delta_coupling.empty()) {
        int xp = (x + 1) % c.n_x;
        int xm = (x + c.n_x - 1) % c.n_x;
        const Rational& dcr = k.delta_coupling[c.idx(t, x)];
        const Rational& dcl = k.delta_coupling[c.idx(t, xm)];
        v -= dcr * (g.values[c.idx(t, xp)] - g.values[c.idx(t, x)]) -
             dcl * (g.values[c.idx(t, x)] - g.values[c.idx(t, xm)]);
      }
      out.values[c.idx(t, x)] = v;
    }
  return out;
}

std::vector<Rational> rce_class_map(const BackgroundPerturbation& k,
                                    const std::vector<Rational>& data,
                                    const Rational& s) {
  validate_perturbation(k);
  SpacetimePtr m2 = perturbed_spacetime(k, s);
  TestFunction f = representative(k.base, data);
  TestFunction fplus = timeslice_reduce(f, k.slab_plus);
  TestFunction on_m2{m2, fplus.values};
  CauchySlab minus2{m2, k.slab_minus.t_low, k.slab_minus.t_high};
  TestFunction fminus = timeslice_reduce(on_m2, minus2);
  TestFunction back{k.base, fminus.values};
  return class_of(back);
}

Observable rce_automorphism(const BackgroundPerturbation& k, const Observable& a) {
  if (!a.spacetime()->same_as(*k.base))
    throw Error(ErrorCode::kSpacetimeMismatch, "observable not on the base");
  int dim = ClassSpace::dimension(*k.base);
  std::vector<Observable> mapped;
  mapped.reserve(dim);
  for (int j = 0; j < dim; ++j) {
    std::vector<Rational> e(dim, Rational(0));
    e[j] = 1;
    std::vector<Rational> img = rce_class_map(k, e);
    Observable g(k.base);
    for (int i = 0; i < dim; ++i)
      if (sgn(img[i]) != 0) g.add_term({static_cast<uint32_t>(i)}, RC(img[i]));
    mapped.push_back(std::move(g));
  }
  Observable out = Observable::zero(k.base);
  for (const auto& [mono, c] : a.terms()) {
    Observable term = Observable::scalar(k.base, c);
    for (uint32_t j : mono) term = term * mapped.at(j);
    out = out + term;
  }
  return out;
}

Observable rce_derivative(const BackgroundPerturbation& k, const TestFunction& f) {
  validate_perturbation(k);
  if (!f.spacetime->same_as(*k.base))
    throw Error(ErrorCode::kSpacetimeMismatch, "test function not on the base");
  TestFunction fplus = timeslice_reduce(f, k.slab_plus);
  // d/ds E_s = -E_ret K E_ret + E_adv K E_adv at s = 0.
  TestFunction ret = green_retarded(fplus);
  TestFunction adv = green_advanced(fplus);
  TestFunction d_ret = green_retarded(apply_kappa(k, ret));
  TestFunction d_adv = green_advanced(apply_kappa(k, adv));
  TestFunction du = add(scale(Rational(-1), d_ret), d_adv);
  // Two-row encoding of the derivative data at the past slab.
  const auto& c = k.base->component(0);
  TestFunction df = zero_function(k.base);
  int l = k.slab_minus.t_low;
  for (int x = 0; x < c.n_x; ++x) {
    df.values[c.idx(l, x)] = du.values[c.idx(l + 1, x)];
    df.values[c.idx(l + 1, x)] = -du.values[c.idx(l, x)];
  }
  return smeared_field(df);
}

Observable rce_fd_quotient(const BackgroundPerturbation& k, const TestFunction& f,
                           const Rational& s) {
  std::vector<Rational> data = class_of(f);
  std::vector<Rational> plus = rce_class_map(k, data, s);
  std::vector<Rational> minus = rce_class_map(k, data, -s);
  Observable out(f.spacetime);
  Rational half_inv = Rational(1) / (Rational(2) * s);
  for (size_t i = 0; i < plus.size(); ++i) {
    Rational v = (plus[i] - minus[i]) * half_inv;
    if (sgn(v) != 0) out.add_term({static_cast<uint32_t>(i)}, RC(v));
  }
  return out;
}

Observable stress_energy_commutator(const BackgroundPerturbation& k,
                                    const TestFunction& f) {
  validate_perturbation(k);
  if (!perturbation_is_mass_type(k))
    throw Error(ErrorCode::kUnsupportedPerturbationType,
                "stress-energy form implemented for mass-type perturbations only");
  const auto& c = k.base->component(0);
  Observable t_kappa = Observable::zero(k.base);
  Rational half(1, 2);
  for (int i = 0; i < c.sites(); ++i) {
    if (sgn(k.delta_mass_sq[i]) == 0) continue;
    Observable phi_z = smeared_field(delta_function(k.base, k.base->site_at(i)));
    t_kappa = t_kappa + (phi_z * phi_z).scaled(RC(half * k.delta_mass_sq[i]));
  }
  Observable comm = commutator(t_kappa, smeared_field(f));
  return comm.scaled(RC::i_times(Rational(1)));
}

Observable background_independence_residual(const BackgroundPerturbation& k,
                                            const TestFunction& f) {
  return rce_derivative(k, f);
}

}  // namespace lcqft
