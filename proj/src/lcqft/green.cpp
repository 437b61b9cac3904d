#include "lcqft/green.hpp"

namespace lcqft {

TestFunction zero_function(const SpacetimePtr& m) {
  return TestFunction{m, std::vector<Rational>(m->site_count(), Rational(0))};
}

TestFunction delta_function(const SpacetimePtr& m, const Site& s) {
  TestFunction f = zero_function(m);
  f.values[m->index_of(s)] = 1;
  return f;
}

TestFunction add(const TestFunction& a, const TestFunction& b) {
  if (!a.spacetime->same_as(*b.spacetime))
    throw Error(ErrorCode::kSpacetimeMismatch, "test functions on different spacetimes");
  TestFunction out = a;
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
  return out;
}

TestFunction scale(const Rational& c, const TestFunction& a) {
  TestFunction out = a;
  for (auto& v : out.values) v *= c;
  return out;
}

bool time_interior_support(const TestFunction& f) {
  const auto& m = *f.spacetime;
  for (int c = 0; c < m.component_count(); ++c) {
    const auto& comp = m.component(c);
    for (int x = 0; x < comp.n_x; ++x) {
      if (sgn(f.values[m.component_offset(c) + comp.idx(0, x)]) != 0) return false;
      if (sgn(f.values[m.component_offset(c) + comp.idx(comp.n_t - 1, x)]) != 0)
        return false;
    }
  }
  return true;
}

template <>
Rational scalar_from_rational<Rational>(const Rational& r) {
  return r;
}

template <>
double scalar_from_rational<double>(const Rational& r) {
  return to_double(r);
}

namespace {

// (A_t phi)(x): the time-diagonal block of P at row t.
template <typename T>
void row_block_apply(const Component& c, int t, const T* phi, T* out) {
  for (int x = 0; x < c.n_x; ++x) {
    int xp = (x + 1) % c.n_x;
    int xm = (x + c.n_x - 1) % c.n_x;
    T cl = scalar_from_rational<T>(c.coupling_at(t, xm));
    T cr = scalar_from_rational<T>(c.coupling_at(t, x));
    T m2 = scalar_from_rational<T>(c.mass_at(t, x));
    out[x] = T(-2) * phi[x] - (cr * (phi[xp] - phi[x]) - cl * (phi[x] - phi[xm])) +
             m2 * phi[x];
  }
}

}  // namespace

template <typename T>
std::vector<T> kg_apply_component(const Component& c, const std::vector<T>& phi) {
  std::vector<T> out(c.sites(), T(0));
  std::vector<T> block(c.n_x, T(0));
  for (int t = 0; t < c.n_t; ++t) {
    row_block_apply<T>(c, t, phi.data() + t * c.n_x, block.data());
    for (int x = 0; x < c.n_x; ++x) {
      T v = block[x];
      if (t + 1 < c.n_t) v += phi[c.idx(t + 1, x)];
      if (t - 1 >= 0) v += phi[c.idx(t - 1, x)];
      out[c.idx(t, x)] = v;
    }
  }
  return out;
}

template <typename T>
std::vector<T> solve_retarded_component(const Component& c,
                                        const std::vector<T>& f) {
  // u(t+1) = f(t) - A_t u(t) - u(t-1), u(0) = 0, u(-1) = 0.
  std::vector<T> u(c.sites(), T(0));
  std::vector<T> block(c.n_x, T(0));
  for (int t = 0; t + 1 < c.n_t; ++t) {
    row_block_apply<T>(c, t, u.data() + t * c.n_x, block.data());
    for (int x = 0; x < c.n_x; ++x) {
      T v = f[c.idx(t, x)] - block[x];
      if (t - 1 >= 0) v -= u[c.idx(t - 1, x)];
      u[c.idx(t + 1, x)] = v;
    }
  }
  return u;
}

template <typename T>
std::vector<T> solve_advanced_component(const Component& c,
                                        const std::vector<T>& f) {
  // v(t-1) = f(t) - A_t v(t) - v(t+1), v(n_t-1) = 0, v(n_t) = 0.
  std::vector<T> v(c.sites(), T(0));
  std::vector<T> block(c.n_x, T(0));
  for (int t = c.n_t - 1; t >= 1; --t) {
    row_block_apply<T>(c, t, v.data() + t * c.n_x, block.data());
    for (int x = 0; x < c.n_x; ++x) {
      T w = f[c.idx(t, x)] - block[x];
      if (t + 1 < c.n_t) w -= v[c.idx(t + 1, x)];
      v[c.idx(t - 1, x)] = w;
    }
  }
  return v;
}

template <typename T>
std::vector<T> causal_propagator_component(const Component& c,
                                           const std::vector<T>& f) {
  std::vector<T> u = solve_retarded_component<T>(c, f);
  std::vector<T> v = solve_advanced_component<T>(c, f);
  for (int i = 0; i < c.sites(); ++i) u[i] -= v[i];
  return u;
}

template std::vector<Rational> kg_apply_component<Rational>(
    const Component&, const std::vector<Rational>&);
template std::vector<double> kg_apply_component<double>(const Component&,
                                                        const std::vector<double>&);
template std::vector<Rational> solve_retarded_component<Rational>(
    const Component&, const std::vector<Rational>&);
template std::vector<double> solve_retarded_component<double>(
    const Component&, const std::vector<double>&);
template std::vector<Rational> solve_advanced_component<Rational>(
    const Component&, const std::vector<Rational>&);
template std::vector<double> solve_advanced_component<double>(
    const Component&, const std::vector<double>&);
template std::vector<Rational> causal_propagator_component<Rational>(
    const Component&, const std::vector<Rational>&);
template std::vector<double> causal_propagator_component<double>(
    const Component&, const std::vector<double>&);

namespace {

template <typename Fn>
TestFunction componentwise(const TestFunction& f, Fn&& fn) {
  const auto& m = *f.spacetime;
  TestFunction out = zero_function(f.spacetime);
  for (int c = 0; c < m.component_count(); ++c) {
    const auto& comp = m.component(c);
    std::vector<Rational> in(comp.sites());
    for (int i = 0; i < comp.sites(); ++i)
      in[i] = f.values[m.component_offset(c) + i];
    std::vector<Rational> res = fn(comp, in);
    for (int i = 0; i < comp.sites(); ++i)
      out.values[m.component_offset(c) + i] = res[i];
  }
  return out;
}

}  // namespace

TestFunction kg_apply(const TestFunction& f) {
  return componentwise(f, [](const Component& c, const std::vector<Rational>& in) {
    return kg_apply_component<Rational>(c, in);
  });
}

TestFunction green_retarded(const TestFunction& f) {
  return componentwise(f, [](const Component& c, const std::vector<Rational>& in) {
    return solve_retarded_component<Rational>(c, in);
  });
}

TestFunction green_advanced(const TestFunction& f) {
  return componentwise(f, [](const Component& c, const std::vector<Rational>& in) {
    return solve_advanced_component<Rational>(c, in);
  });
}

TestFunction causal_propagator(const TestFunction& f) {
  return componentwise(f, [](const Component& c, const std::vector<Rational>& in) {
    return causal_propagator_component<Rational>(c, in);
  });
}

Rational dot(const TestFunction& f, const TestFunction& g) {
  if (!f.spacetime->same_as(*g.spacetime))
    throw Error(ErrorCode::kSpacetimeMismatch, "pairing across spacetimes");
  Rational s(0);
  for (size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * g.values[i];
  return s;
}

Rational pairing_E(const TestFunction& f, const TestFunction& g) {
  return dot(f, causal_propagator(g));
}

namespace {

RationalMatrix columns_of(const Component& c,
                          std::vector<Rational> (*solve)(const Component&,
                                                         const std::vector<Rational>&)) {
  int n = c.sites();
  RationalMatrix m(n, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> e(n, Rational(0));
  for (int j = 0; j < n; ++j) {
    e[j] = 1;
    std::vector<Rational> col = solve(c, e);
    for (int i = 0; i < n; ++i) m[i][j] = col[i];
    e[j] = 0;
  }
  return m;
}

std::vector<Rational> kg_fn(const Component& c, const std::vector<Rational>& f) {
  return kg_apply_component<Rational>(c, f);
}
std::vector<Rational> ret_fn(const Component& c, const std::vector<Rational>& f) {
  return solve_retarded_component<Rational>(c, f);
}
std::vector<Rational> adv_fn(const Component& c, const std::vector<Rational>& f) {
  return solve_advanced_component<Rational>(c, f);
}
std::vector<Rational> e_fn(const Component& c, const std::vector<Rational>& f) {
  return causal_propagator_component<Rational>(c, f);
}

}  // namespace

RationalMatrix kg_matrix(const Component& c) { return columns_of(c, kg_fn); }
RationalMatrix green_retarded_matrix(const Component& c) {
  return columns_of(c, ret_fn);
}
RationalMatrix green_advanced_matrix(const Component& c) {
  return columns_of(c, adv_fn);
}
RationalMatrix causal_propagator_matrix(const Component& c) {
  return columns_of(c, e_fn);
}

TestFunction timeslice_reduce(const TestFunction& f, const CauchySlab& slab) {
  if (!f.spacetime->same_as(*slab.spacetime))
    throw Error(ErrorCode::kSpacetimeMismatch, "slab belongs to another spacetime");
  if (!slab_valid(slab))
    throw Error(ErrorCode::kSlabTooThin,
                "slab needs t_high >= t_low+1 and one margin row each side");
  TestFunction u = causal_propagator(f);
  const auto& m = *f.spacetime;
  TestFunction out = zero_function(f.spacetime);
  for (int c = 0; c < m.component_count(); ++c) {
    const auto& comp = m.component(c);
    int off = m.component_offset(c);
    for (int x = 0; x < comp.n_x; ++x) {
      out.values[off + comp.idx(slab.t_low, x)] =
          u.values[off + comp.idx(slab.t_low + 1, x)];
      out.values[off + comp.idx(slab.t_low + 1, x)] =
          -u.values[off + comp.idx(slab.t_low, x)];
    }
  }
  return out;
}

}  // namespace lcqft
