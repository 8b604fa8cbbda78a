#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "ringexp/configuration.hpp"

namespace ringexp {

// Maximal run of occupied nodes start, start+1, ..., start+length-1.
struct Segment {
  int start = 0;
  int length = 0;
  bool operator==(const Segment&) const = default;
};

// Maximal run of free nodes. `neighbors` are the occupied nodes just
// outside each extremity (they coincide when only one node is occupied).
struct Hole {
  int start = 0;
  int length = 0;
  std::array<int, 2> extremities{};
  std::array<int, 2> neighbors{};
  bool operator==(const Hole&) const = default;
};

// Tail, a run of `size` free nodes, a 2-tower, then the head. `orientation`
// is the index step (+1 or -1) walking from tail to head along the path.
struct ArrowDescriptor {
  int tail = 0;
  int head = 0;
  int tower = 0;
  int size = 0;
  int orientation = +1;
  bool operator==(const ArrowDescriptor&) const = default;
};

namespace detail {

// Maximal runs of nodes whose occupancy equals `occupied`, sorted by start.
inline std::vector<Segment> runs(const Configuration& c, bool occupied) {
  const int n = c.size();
  std::vector<Segment> out;
  int anchor = -1;
  for (int i = 0; i < n; ++i) {
    if (c.occupied(i) != c.occupied(i - 1)) {
      anchor = i;
      break;
    }
  }
  if (anchor < 0) {
    if (c.occupied(0) == occupied) out.push_back({0, n});
    return out;
  }
  for (int s = 0; s < n;) {
    const int start = wrap(anchor + s, n);
    int len = 1;
    while (s + len < n && c.occupied(start + len) == c.occupied(start)) ++len;
    if (c.occupied(start) == occupied) out.push_back({start, len});
    s += len;
  }
  std::sort(out.begin(), out.end(), [](const Segment& a, const Segment& b) { return a.start < b.start; });
  return out;
}

}  // namespace detail

inline std::vector<Segment> segments(const Configuration& c) { return detail::runs(c, true); }

inline std::vector<Hole> holes(const Configuration& c) {
  const int n = c.size();
  if (c.robots() == 0) throw RingError("no occupied node");
  std::vector<Hole> out;
  for (const Segment& r : detail::runs(c, false)) {
    const int last = wrap(r.start + r.length - 1, n);
    out.push_back({r.start, r.length, {r.start, last}, {wrap(r.start - 1, n), wrap(last + 1, n)}});
  }
  return out;
}

inline bool has_segment_of_length(const Configuration& c, int length) {
  const auto segs = segments(c);
  return std::any_of(segs.begin(), segs.end(), [&](const Segment& s) { return s.length == length; });
}

// Every arrow present in c. Configurations of four robots hold at most one.
inline std::vector<ArrowDescriptor> all_arrows(const Configuration& c) {
  const int n = c.size();
  std::vector<ArrowDescriptor> out;
  for (int tower = 0; tower < n; ++tower) {
    if (c[tower] != 2) continue;
    for (int dir : {+1, -1}) {
      const int head = wrap(tower + dir, n);
      if (c[head] != 1) continue;
      int size = 0;
      int probe = wrap(tower - dir, n);
      while (size < n && c[probe] == 0) {
        ++size;
        probe = wrap(probe - dir, n);
      }
      if (size == 0 || probe == head || probe == tower || c[probe] != 1) continue;
      out.push_back({probe, head, tower, size, dir});
    }
  }
  return out;
}

inline std::optional<ArrowDescriptor> find_arrow(const Configuration& c) {
  auto arrows = all_arrows(c);
  if (arrows.empty()) return std::nullopt;
  return arrows.front();
}

// Final: the tail has reached the head's far side, i.e. the arrow path spans
// the whole ring (size n - 3) and no hole separates tail from head.
inline bool is_final_arrow(const Configuration& c) {
  const auto arrow = find_arrow(c);
  return arrow && arrow->size == c.size() - 3;
}

inline bool is_primary_arrow(const Configuration& c) {
  const auto arrow = find_arrow(c);
  return arrow && arrow->size == 1;
}

}  // namespace ringexp
