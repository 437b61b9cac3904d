#include "lcqft/exact_linalg.hpp"

namespace lcqft {

SparseVec sparse_from_dense(const std::vector<Rational>& v) {
  SparseVec out;
  for (size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) out.emplace_back(static_cast<int>(i), v[i]);
  return out;
}

std::vector<Rational> sparse_to_dense(const SparseVec& v, int dim) {
  std::vector<Rational> out(dim, Rational(0));
  for (const auto& [i, val] : v) out[i] = val;
  return out;
}

SparseVec sparse_axpy(const SparseVec& y, const Rational& a, const SparseVec& x) {
  SparseVec out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      Rational v = a * x[j].second;
      if (sgn(v) != 0) out.emplace_back(x[j].first, std::move(v));
      ++j;
    } else {
      Rational v = y[i].second + a * x[j].second;
      if (sgn(v) != 0) out.emplace_back(y[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVec sparse_scale(const Rational& a, const SparseVec& x) {
  if (sgn(a) == 0) return {};
  SparseVec out = x;
  for (auto& [i, v] : out) v *= a;
  return out;
}

bool sparse_is_zero(const SparseVec& v) { return v.empty(); }

SparseVec TrackedEchelon::reduce(SparseVec v) const {
  while (!v.empty()) {
    auto it = rows_.find(v.front().first);
    if (it == rows_.end()) break;
    Rational coef = v.front().second;
    v = sparse_axpy(v, -coef, it->second.vec);
  }
  return v;
}

std::optional<SparseVec> TrackedEchelon::insert(SparseVec v, int tag) {
  SparseVec combo{{tag, Rational(1)}};
  while (!v.empty()) {
    auto it = rows_.find(v.front().first);
    if (it == rows_.end()) break;
    Rational coef = v.front().second;
    v = sparse_axpy(v, -coef, it->second.vec);
    combo = sparse_axpy(combo, -coef, it->second.combo);
  }
  if (v.empty()) return combo;  // dependency: combo is a kernel vector
  Rational lead = v.front().second;
  Rational inv = Rational(1) / lead;
  v = sparse_scale(inv, v);
  combo = sparse_scale(inv, combo);
  int key = v.front().first;
  rows_.emplace(key, Row{std::move(v), std::move(combo)});
  return std::nullopt;
}

bool TrackedEchelon::insert_untracked(SparseVec v) {
  return !insert(std::move(v), next_anon_tag_--).has_value();
}

std::optional<SparseVec> TrackedEchelon::try_represent(const SparseVec& v) const {
  SparseVec rem = v;
  SparseVec combo;
  while (!rem.empty()) {
    auto it = rows_.find(rem.front().first);
    if (it == rows_.end()) return std::nullopt;
    Rational coef = rem.front().second;
    rem = sparse_axpy(rem, -coef, it->second.vec);
    combo = sparse_axpy(combo, coef, it->second.combo);
  }
  return combo;
}

int rank_of(const std::vector<SparseVec>& columns) {
  TrackedEchelon ech;
  int r = 0;
  for (const auto& c : columns)
    if (ech.insert_untracked(c)) ++r;
  return r;
}

std::vector<SparseVec> kernel_of(const std::vector<SparseVec>& columns) {
  TrackedEchelon ech;
  std::vector<SparseVec> kernel;
  for (size_t j = 0; j < columns.size(); ++j) {
    auto dep = ech.insert(columns[j], static_cast<int>(j));
    if (dep) kernel.push_back(std::move(*dep));
  }
  return kernel;
}

}  // namespace lcqft
