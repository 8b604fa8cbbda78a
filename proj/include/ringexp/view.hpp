#pragma once

#include <utility>
#include <vector>

#include "ringexp/configuration.hpp"

namespace ringexp {

// The two orientation sequences read from one node. As an observation the
// view is the unordered pair {forward, backward}; `forward` runs toward
// increasing indices and exists only so callers can translate a choice of
// sequence back into an edge.
struct View {
  std::vector<int> forward;
  std::vector<int> backward;

  bool symmetric() const { return forward == backward; }

  // Unordered-pair key: (smaller, larger).
  std::pair<std::vector<int>, std::vector<int>> key() const {
    if (backward < forward) return {backward, forward};
    return {forward, backward};
  }

  // +1 when the forward sequence is the lexicographically smaller one, -1
  // when the backward one is, 0 when the view is symmetric.
  int smaller_side() const {
    if (forward < backward) return +1;
    if (backward < forward) return -1;
    return 0;
  }

  bool operator==(const View& other) const { return key() == other.key(); }
};

inline View view_of(const Configuration& c, int i) {
  const int n = c.size();
  View v;
  v.forward.resize(static_cast<std::size_t>(n));
  v.backward.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    v.forward[static_cast<std::size_t>(j)] = c[static_cast<long long>(i) + j];
    v.backward[static_cast<std::size_t>(j)] = c[static_cast<long long>(i) - j];
  }
  return v;
}

}  // namespace ringexp
