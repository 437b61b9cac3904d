#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcqft/rational.hpp"

#include <nlohmann/json.hpp>

namespace lcqft {

enum class ErrorCode {
  kParse = 1,
  kInvalidArgument = 2,
  kSpacetimeMismatch = 3,
  kCausallyRelatedImages = 4,
  kSlabTooThin = 5,
  kPerturbationNotBetweenSlabs = 6,
  kUnsupportedPerturbationType = 7,
  kTruncationInconsistent = 8,
  kNotAdmissible = 9,
  kFileNotFound = 10,
  kSchemaViolation = 11,
  kInternal = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// A site of a (possibly disconnected) lattice spacetime.
struct Site {
  int comp = 0;
  int t = 0;
  int x = 0;
  bool operator==(const Site&) const = default;
};

std::string to_string(const Site& s);

// One connected component: n_t time rows over a periodic spatial circle of
// n_x sites. coupling(t,x) belongs to the spatial edge {x, x+1} at time t;
// mass_sq(t,x) to the site.
struct Component {
  int n_t = 0;
  int n_x = 0;
  std::vector<Rational> coupling;
  std::vector<Rational> mass_sq;

  int sites() const { return n_t * n_x; }
  int idx(int t, int x) const { return t * n_x + x; }
  const Rational& coupling_at(int t, int x) const { return coupling[idx(t, x)]; }
  const Rational& mass_at(int t, int x) const { return mass_sq[idx(t, x)]; }
};

class Spacetime;
using SpacetimePtr = std::shared_ptr<const Spacetime>;

// Finite 1+1-dimensional causal lattice, the object type of the discrete
// category of spacetimes. Immutable after construction.
class Spacetime {
 public:
  static SpacetimePtr create(std::vector<Component> comps);
  static SpacetimePtr empty() { return create({}); }
  static SpacetimePtr from_json(const nlohmann::json& j);

  int component_count() const { return static_cast<int>(comps_.size()); }
  const Component& component(int c) const { return comps_.at(c); }
  const std::vector<Component>& components() const { return comps_; }
  bool is_empty() const { return comps_.empty(); }

  int site_count() const { return total_sites_; }
  int component_offset(int c) const { return offsets_.at(c); }
  int index_of(const Site& s) const;
  Site site_at(int index) const;
  bool valid_site(const Site& s) const;

  // Causal order J^+: within one component p <= q iff q is no earlier and
  // within the unit-speed cone; sites of distinct components are unrelated.
  bool causally_leq(const Site& p, const Site& q) const;
  bool spacelike(const Site& p, const Site& q) const;
  std::vector<Site> causal_future(const Site& p) const;
  std::vector<Site> causal_past(const Site& p) const;

  int circle_dist(int c, int x0, int x1) const;

  // Structural equality (same components and coefficients).
  bool same_as(const Spacetime& other) const;

  nlohmann::json to_json() const;

 private:
  explicit Spacetime(std::vector<Component> comps);
  std::vector<Component> comps_;
  std::vector<int> offsets_;
  int total_sites_ = 0;
};

// Candidate map between lattices; admissibility is a property to be checked.
struct Embedding {
  SpacetimePtr source;
  SpacetimePtr target;
  std::vector<int> site_map;  // source site index -> target site index

  Site map_site(const Site& s) const;
};

struct AdmissibilityReport {
  bool admissible = false;
  std::string violated_clause;  // empty when admissible
  std::optional<std::pair<Site, Site>> witness;
  std::string detail;
};

// Checks every clause of admissibility: totality/injectivity, time
// orientation, spatial orientation (cyclic successor preserved), coefficient
// preservation, causal order preserved both ways, causal convexity of the
// image.
AdmissibilityReport check_admissible(const Embedding& chi);

inline bool is_admissible(const Embedding& chi) {
  return check_admissible(chi).admissible;
}

Embedding identity_embedding(const SpacetimePtr& m);
Embedding compose(const Embedding& second, const Embedding& first);

// Embeds `source` into component `comp` of `target`, shifting time by dt and
// rotating space by rot. Throws unless the shapes and coefficients fit.
Embedding translate_embedding(const SpacetimePtr& source,
                              const SpacetimePtr& target, int comp, int dt,
                              int rot);

struct CauchySlab {
  SpacetimePtr spacetime;
  int t_low = 0;
  int t_high = 0;
};

bool slab_valid(const CauchySlab& slab);

// The rows [t_low, t_high] of every component as a spacetime of its own,
// together with the inclusion morphism.
std::pair<SpacetimePtr, Embedding> slab_subspacetime(const CauchySlab& slab);

struct DisjointUnion {
  SpacetimePtr object;
  Embedding inj1;
  Embedding inj2;
};

DisjointUnion disjoint_union(const SpacetimePtr& m1, const SpacetimePtr& m2);

// Piecewise map of two embeddings with causally disjoint images; throws
// Error(kCausallyRelatedImages) when the tensor gluing is undefined.
Embedding glue_embeddings(const Embedding& chi1, const Embedding& chi2);

// Test fixture: maps the sites of `source` onto a diamond-shaped patch of
// `target` around (t_center, x_center). Generally not admissible; used to
// exercise violation reporting.
Embedding diamond_map(const SpacetimePtr& source, const SpacetimePtr& target,
                      int comp, int t_center, int x_center);

// All causal paths from p to q stepping one time row at a time. Exponential;
// intended as a test oracle on small lattices.
std::vector<std::vector<Site>> enumerate_causal_paths(const Spacetime& m,
                                                      const Site& p,
                                                      const Site& q);

// Causal convexity of an image set via the order-interval characterization.
bool causally_convex(const Spacetime& m, const std::vector<int>& image_sites);

}  // namespace lcqft
