#pragma once

#include <algorithm>
#include <iterator>
#include <vector>

namespace lcqft {

// Merges two strictly increasing lists of fermionic generator indices.
// Returns false on a repeated index (odd square); otherwise fills the merged
// list and the Koszul sign of the interleave.
template <typename Index>
bool merge_fermionic(const std::vector<Index>& u, const std::vector<Index>& v,
                     std::vector<Index>& out, int& sign) {
  out.clear();
  out.reserve(u.size() + v.size());
  size_t i = 0;
  long swaps = 0;
  for (Index b : v) {
    while (i < u.size() && u[i] < b) ++i;
    if (i < u.size() && u[i] == b) return false;
    swaps += static_cast<long>(u.size() - i);
  }
  std::merge(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(out));
  sign = (swaps % 2 == 0) ? 1 : -1;
  return true;
}

// Sorted insert of one fermionic index. Returns false on collision; sign is
// the parity of the transpositions needed.
template <typename Index>
bool insert_fermionic(std::vector<Index>& list, Index value, int& sign) {
  auto it = std::lower_bound(list.begin(), list.end(), value);
  if (it != list.end() && *it == value) return false;
  size_t jumps = static_cast<size_t>(std::distance(it, list.end()));
  sign = (jumps % 2 == 0) ? 1 : -1;
  list.insert(it, value);
  return true;
}

}  // namespace lcqft
