#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lcqft/ccr.hpp"

namespace lcqft {

// Value algebra of the BV-extended on-shell theory over one spacetime:
// observables tensored with antifield generators (ghost -1, odd) and the
// gauge ghosts (ghost +1, odd). The field-equation ideal is already divided
// out of the observable factor, so the Koszul-Tate part of the differential
// is absorbed; what remains is the ghost-paired gauge action.
struct FieldKey {
  std::vector<uint32_t> anti;  // strictly increasing basis indices
  std::vector<uint8_t> ghost;  // strictly increasing gauge indices
  auto operator<=>(const FieldKey&) const = default;

  int ghost_number() const {
    return static_cast<int>(ghost.size()) - static_cast<int>(anti.size());
  }
  int parity() const {
    return static_cast<int>((anti.size() + ghost.size()) % 2);
  }
};

class FieldCategory;

class FieldValue {
 public:
  FieldValue(SpacetimePtr m, int gauge_dim)
      : spacetime_(std::move(m)), gauge_dim_(gauge_dim) {}

  static FieldValue from_observable(const Observable& a, int gauge_dim);
  static FieldValue antifield(SpacetimePtr m, int gauge_dim,
                              const std::vector<Rational>& klass);
  static FieldValue ghost(SpacetimePtr m, int gauge_dim, int mu);

  const SpacetimePtr& spacetime() const { return spacetime_; }
  int gauge_dim() const { return gauge_dim_; }
  const std::map<FieldKey, Observable>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const FieldKey& key, const Observable& a);

  FieldValue operator+(const FieldValue& o) const;
  FieldValue operator-(const FieldValue& o) const;
  FieldValue operator*(const FieldValue& o) const;  // graded product
  FieldValue scaled(const RC& c) const;

  bool operator==(const FieldValue& o) const { return terms_ == o.terms_; }

  // Ghost numbers present (observable factors count as 0).
  bool homogeneous(int* ghost_number) const;

  std::string to_string() const;

 private:
  SpacetimePtr spacetime_;
  int gauge_dim_;
  std::map<FieldKey, Observable> terms_;
};

// One object of the category together with its precomputed gauge data.
struct FieldObject {
  SpacetimePtr spacetime;
  // Matrix of the symplectic shift generator rho = push(+shift) -
  // push(-shift) on generator classes, one per gauge generator.
  std::vector<std::vector<std::vector<Rational>>> rho_hat;
};

struct FieldMorphism {
  int source = 0;
  int target = 0;
  Embedding embedding;
  std::string label;
};

// Objects: periodic lattices with site-independent coefficients. Morphisms:
// spatial rotations and disjoint-union injections. Gauge algebra: abelian
// discrete shifts acting through the antisymmetric difference
// rho_k f = shift^k f - shift^{-k} f, which is infinitesimally symplectic.
class FieldCategory {
 public:
  static std::shared_ptr<const FieldCategory> from_json(const nlohmann::json& j);
  static std::shared_ptr<const FieldCategory> make(
      std::vector<SpacetimePtr> objects, std::vector<int> shift_powers,
      const std::vector<std::pair<int, int>>& unions);

  int object_count() const { return static_cast<int>(objects_.size()); }
  const FieldObject& object(int i) const { return objects_.at(i); }
  const std::vector<FieldMorphism>& morphisms() const { return morphisms_; }
  int gauge_dim() const { return static_cast<int>(shift_powers_.size()); }
  const std::vector<int>& shift_powers() const { return shift_powers_; }

  // rho_k applied to a test function on object i.
  TestFunction gauge_action(int object_index, int mu, const TestFunction& f) const;

  // Exact check that the gauge action commutes with every morphism.
  bool gauge_equivariant(std::string* witness = nullptr) const;

 private:
  std::vector<FieldObject> objects_;
  std::vector<FieldMorphism> morphisms_;
  std::vector<int> shift_powers_;
};

using FieldCategoryPtr = std::shared_ptr<const FieldCategory>;

// A family of multilinear evaluators indexed by the objects.
struct NatField {
  FieldCategoryPtr category;
  std::string name;
  int arity = 0;
  int ghost_number = 0;
  // evaluator(object_index, test functions) -> value
  std::function<FieldValue(int, const std::vector<TestFunction>&)> evaluate;
};

// Pushforward of a value along a category morphism.
FieldValue value_pushforward(const FieldCategory& cat, const FieldMorphism& mor,
                             const FieldValue& v);

struct NaturalityReport {
  bool natural = false;
  std::string morphism_label;
  std::string detail;
};

// Checks the naturality square on every morphism against a spanning set of
// delta tuples.
NaturalityReport check_naturality(const NatField& field);

// Eq-style symmetrized product: (Phi Psi)(f_1..f_{p+q}) =
//   1/(p! q!) sum over all permutations of slot assignments.
NatField field_product(const NatField& phi, const NatField& psi);

// The BRST differential on fields: s of the value plus the ghost-paired
// insertion of the gauge action on each smearing slot.
NatField field_brst(const NatField& phi);

// Value-level part of the differential (used by field_brst and tests).
FieldValue value_brst(const FieldCategory& cat, int object_index,
                      const FieldValue& v);

struct ProbeEntry {
  std::string name;
  bool closed = false;
  bool exact = false;
  bool decidable = true;  // false: AnsatzTooSmall
  std::string detail;
};

// Classifies ghost-number-0 candidates as closed / exact within the span of
// ghost-number -1 antifield fields composed with powers of the gauge action.
std::vector<ProbeEntry> field_cohomology_probe(const std::vector<NatField>& candidates,
                                               int ansatz_shift_powers = 3);

// Candidate described by a sparse term language; see candidates JSON.
NatField candidate_from_json(const FieldCategoryPtr& cat, const nlohmann::json& j);

// The ghost-number -1 ansatz fields used by the probe.
std::vector<NatField> exactness_ansatz(const FieldCategoryPtr& cat, int arity,
                                       int max_shift_power);

}  // namespace lcqft
