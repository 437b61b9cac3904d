#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lcqft/rational.hpp"

namespace lcqft {

// Sparse rational vector: (index, value) pairs, strictly increasing indices,
// no explicit zeros.
using SparseVec = std::vector<std::pair<int, Rational>>;

SparseVec sparse_from_dense(const std::vector<Rational>& v);
std::vector<Rational> sparse_to_dense(const SparseVec& v, int dim);
// y + a*x
SparseVec sparse_axpy(const SparseVec& y, const Rational& a, const SparseVec& x);
SparseVec sparse_scale(const Rational& a, const SparseVec& x);
bool sparse_is_zero(const SparseVec& v);

// Incremental row echelon over the rationals with combination tracking.
// Vectors inserted are remembered as combinations of the caller's column
// indices, which turns the echelon into a rank / kernel / membership oracle.
class TrackedEchelon {
 public:
  // Inserts v tagged as column `tag`. Returns a kernel combination (in tag
  // space) when v is dependent on what came before, nullopt otherwise.
  std::optional<SparseVec> insert(SparseVec v, int tag);

  // Inserts without tagging; returns true when the rank grew.
  bool insert_untracked(SparseVec v);

  // Reduces v against the rows; empty result means membership in the span.
  SparseVec reduce(SparseVec v) const;

  // If v lies in the span, returns the combination of previously inserted
  // tags that reproduces it.
  std::optional<SparseVec> try_represent(const SparseVec& v) const;

  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  struct Row {
    SparseVec vec;    // normalized: leading coefficient 1
    SparseVec combo;  // tag-space combination producing vec
  };
  std::map<int, Row> rows_;  // keyed by leading index
  int next_anon_tag_ = -1;
};

// Rank of the span of the given vectors.
int rank_of(const std::vector<SparseVec>& columns);

// Basis of { c : sum_j c_j columns[j] = 0 } in column-index space.
std::vector<SparseVec> kernel_of(const std::vector<SparseVec>& columns);

}  // namespace lcqft
