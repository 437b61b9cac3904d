#include "lcqft/fixtures.hpp"

namespace lcqft::fixtures {

const char* default_spacetime() {
  return R"({
  "n_t": 12,
  "n_x": 4,
  "coupling": 1,
  "mass_sq": "1/3"
})";
}

const char* default_kappa() {
  return R"({
  "slab_minus": [1, 2],
  "slab_plus": [9, 10],
  "delta_mass_sq": [[5, 0, "3/2"], [6, 0, "5/2"], [7, 0, 2]]
})";
}

const char* so3_model() {
  return R"({
  "name": "so3_on_r3",
  "config_dim": 3,
  "gauge_dim": 3,
  "structure_constants": [
    [2, 0, 1, 1], [2, 1, 0, -1],
    [0, 1, 2, 1], [0, 2, 1, -1],
    [1, 2, 0, 1], [1, 0, 2, -1]
  ],
  "rho_matrices": [
    [[0, 0, 0], [0, 0, 1], [0, -1, 0]],
    [[0, 0, -1], [0, 0, 0], [1, 0, 0]],
    [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]
  ],
  "action": [
    ["1/4", [4, 0, 0]], ["1/4", [0, 4, 0]], ["1/4", [0, 0, 4]],
    ["1/2", [2, 2, 0]], ["1/2", [2, 0, 2]], ["1/2", [0, 2, 2]],
    ["-1/2", [2, 0, 0]], ["-1/2", [0, 2, 0]], ["-1/2", [0, 0, 2]],
    ["1/4", [0, 0, 0]]
  ]
})";
}

const char* abelian_model() {
  return R"({
  "name": "abelian_torus_rotations",
  "config_dim": 4,
  "gauge_dim": 2,
  "rho_matrices": [
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
  ],
  "action": [
    ["1/4", [4, 0, 0, 0]], ["1/2", [2, 2, 0, 0]], ["1/4", [0, 4, 0, 0]],
    ["-1/2", [2, 0, 0, 0]], ["-1/2", [0, 2, 0, 0]],
    ["1/4", [0, 0, 4, 0]], ["1/2", [0, 0, 2, 2]], ["1/4", [0, 0, 0, 4]],
    ["-1/2", [0, 0, 2, 0]], ["-1/2", [0, 0, 0, 2]],
    ["1/2", [0, 0, 0, 0]]
  ]
})";
}

const char* sabotage_model() {
  return R"({
  "name": "sabotage_noninvariant",
  "config_dim": 3,
  "gauge_dim": 3,
  "structure_constants": [
    [2, 0, 1, 1], [2, 1, 0, -1],
    [0, 1, 2, 1], [0, 2, 1, -1],
    [1, 2, 0, 1], [1, 0, 2, -1]
  ],
  "rho_matrices": [
    [[0, 0, 0], [0, 0, 1], [0, -1, 0]],
    [[0, 0, -1], [0, 0, 0], [1, 0, 0]],
    [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]
  ],
  "action": [[1, [1, 0, 0]]]
})";
}

const char* default_category() {
  return R"({
  "objects": [
    { "n_t": 4, "n_x": 3, "coupling": "1/2", "mass_sq": "1/3" }
  ],
  "shifts": [1],
  "unions": [[0, 0]]
})";
}

const char* default_candidates() {
  return R"({
  "candidates": [
    {
      "name": "unit_field",
      "arity": 1,
      "ghost_number": 0,
      "expect_natural": true,
      "expect_closed": true,
      "expect_exact": false,
      "terms": [
        { "coeff": 1, "factors": [ { "type": "sum_slot", "slot": 0 } ] }
      ]
    },
    {
      "name": "linear_field",
      "arity": 1,
      "ghost_number": 0,
      "expect_natural": true,
      "expect_closed": true,
      "expect_exact": false,
      "terms": [
        { "coeff": 1, "factors": [ { "type": "phi_slot", "slot": 0 } ] }
      ]
    },
    {
      "name": "pointwise_density",
      "arity": 1,
      "ghost_number": 0,
      "expect_natural": true,
      "expect_closed": false,
      "terms": [
        { "coeff": 1,
          "factors": [ { "type": "site_density", "slot": 0, "power": 2 } ] }
      ]
    },
    {
      "name": "covariant_density",
      "arity": 2,
      "ghost_number": 0,
      "expect_natural": true,
      "expect_closed": true,
      "expect_exact": false,
      "terms": [
        { "coeff": "1/2",
          "factors": [ { "type": "phi_slot", "slot": 0 },
                       { "type": "phi_slot", "slot": 1 } ] },
        { "coeff": "1/2",
          "factors": [ { "type": "phi_slot", "slot": 1 },
                       { "type": "phi_slot", "slot": 0 } ] }
      ]
    },
    {
      "name": "fixed_site",
      "arity": 1,
      "ghost_number": 0,
      "expect_natural": false,
      "terms": [
        { "coeff": 1,
          "factors": [ { "type": "fixed_site", "slot": 0, "t": 1, "x": 0 } ] }
      ]
    },
    {
      "name": "antifield_field",
      "arity": 1,
      "ghost_number": -1,
      "expect_natural": true,
      "terms": [
        { "coeff": 1,
          "factors": [ { "type": "antifield_slot", "slot": 0 } ] }
      ]
    }
  ]
})";
}

}  // namespace lcqft::fixtures
