#pragma once

#include <algorithm>
#include <array>

#include "ringexp/configuration.hpp"
#include "ringexp/decision.hpp"
#include "ringexp/structure.hpp"
#include "ringexp/view.hpp"

// Compute phase of the four-robot probabilistic exploration protocol for
// rings of more than eight nodes.
//
//   Phase I   towerless, no 4-segment: gather into a 4-segment without ever
//             building a tower.
//   Phase II  4-segment: the two inner robots try to swap places until
//             exactly one of them moves, which yields a primary arrow.
//   Phase III arrow: the tail walks around the ring away from the tower
//             until it touches the head (final arrow, terminal).

namespace ringexp {

// Deliberate protocol faults used to check that the verifiers are not vacuous.
enum class Mutation {
  None,
  // Four isolated robots all next to a longest hole: try to move through the
  // shortest neighboring hole instead, so two robots can meet in a 1-hole.
  Phase1IntoShortHoles,
  // The arrow tail walks toward the tower instead of away from it.
  Phase3Reversed,
};

inline constexpr int kProtocolRobots = 4;
inline constexpr int kMinProtocolNodes = 9;

namespace detail {

inline int step_toward(int node, int dir, int n) { return wrap(node + dir, n); }

// Four robots on distinct nodes, listed by increasing index; gaps[j] counts
// the free nodes between robots[j] and robots[j + 1] (cyclically).
struct Gaps {
  int n = 0;
  std::array<int, 4> robots{};
  std::array<int, 4> gaps{};

  static Gaps of(const Configuration& c) {
    Gaps g;
    g.n = c.size();
    const auto occ = c.occupied_nodes();
    std::copy(occ.begin(), occ.end(), g.robots.begin());
    for (int j = 0; j < 4; ++j) {
      g.gaps[static_cast<std::size_t>(j)] = wrap(g.robot(j + 1) - g.robot(j), g.n) - 1;
    }
    return g;
  }

  int robot(int j) const { return robots[static_cast<std::size_t>(wrap(j, 4))]; }
  int gap(int j) const { return gaps[static_cast<std::size_t>(wrap(j, 4))]; }
  // Hole on the decreasing-index side of robot j, and on the increasing side.
  int back_gap(int j) const { return gap(j - 1); }
  int front_gap(int j) const { return gap(j); }

  int index_of(int node) const {
    for (int j = 0; j < 4; ++j) {
      if (robot(j) == node) return j;
    }
    return -1;
  }
  int zero_gaps() const { return static_cast<int>(std::count(gaps.begin(), gaps.end(), 0)); }
};

inline void require_domain(const Configuration& c) {
  if (c.size() < kMinProtocolNodes || c.robots() != kProtocolRobots) {
    throw RingError("out of protocol domain: requires k = 4 robots and n > 8 nodes");
  }
}

inline void require_occupied(const Configuration& c, int i) {
  if (!c.occupied(i)) throw RingError("node " + std::to_string(wrap(i, c.size())) + " is not occupied");
}

}  // namespace detail

inline Decision phase1_decide(const Configuration& c, int i, Mutation mutation = Mutation::None) {
  detail::require_domain(c);
  detail::require_occupied(c, i);
  if (c.has_tower()) throw RingError("unsupported configuration: Phase I requires a towerless configuration");

  const auto g = detail::Gaps::of(c);
  const int n = g.n;
  const int me = g.index_of(wrap(i, n));
  const int node = g.robot(me);
  const int back = g.back_gap(me);
  const int front = g.front_gap(me);
  auto toward = [&](int dir) { return detail::step_toward(node, dir, n); };

  const int zeros = g.zero_gaps();
  if (zeros == 3) throw RingError("unsupported configuration: 4-segment belongs to Phase II");

  // Two zero gaps side by side: a 3-segment plus the isolated robot.
  if (zeros == 2) {
    int s = 0;
    while (g.gap(s) != 0) ++s;
    if (g.gap(s + 1) == 0 || g.gap(s - 1) == 0) {
      if (back == 0 || front == 0) return Decision::idle();
      if (back == front) return Decision::move_either();
      return Decision::move(toward(back < front ? -1 : +1));
    }
    // Two 2-segments {s, s+1} and {s+2, s+3}; every robot borders exactly one hole.
    const int lmax = std::max(g.gap(s + 1), g.gap(s + 3));
    if (front > 0 && front == lmax) return Decision::try_move(toward(+1));
    if (back > 0 && back == lmax) return Decision::try_move(toward(-1));
    return Decision::idle();
  }

  // A unique 2-segment {s, s+1}; isolated robots s+2 and s+3.
  if (zeros == 1) {
    int s = 0;
    while (g.gap(s) != 0) ++s;
    const int near_a = g.gap(s + 1);  // between segment end s+1 and robot s+2
    const int near_b = g.gap(s + 3);  // between robot s+3 and segment start s
    const int closest = std::min(near_a, near_b);
    if (me == wrap(s + 2, 4) && near_a == closest) return Decision::move(toward(-1));
    if (me == wrap(s + 3, 4) && near_b == closest) return Decision::move(toward(+1));
    return Decision::idle();
  }

  // Four isolated robots.
  const int lmax = *std::max_element(g.gaps.begin(), g.gaps.end());
  auto borders = [&](int j) { return (g.back_gap(j) == lmax ? 1 : 0) + (g.front_gap(j) == lmax ? 1 : 0); };
  int bordering = 0;
  for (int j = 0; j < 4; ++j) bordering += borders(j) > 0 ? 1 : 0;
  const int mine = borders(me);

  if (bordering == 4) {
    if (mutation == Mutation::Phase1IntoShortHoles && back != front) {
      return Decision::try_move(toward(back < front ? -1 : +1));
    }
    if (mine == 1) return Decision::try_move(toward(front == lmax ? +1 : -1));
    const int side = view_of(c, node).smaller_side();
    if (side == 0) return Decision::try_move_either();
    return Decision::try_move(toward(side));
  }
  // Three bordering robots: the two touching exactly one longest hole move
  // toward the robot touching none, which is across their shorter hole.
  // Two bordering robots: both move through their shorter hole.
  if ((bordering == 3 && mine == 1) || (bordering == 2 && mine >= 1)) {
    return Decision::move(toward(back < front ? -1 : +1));
  }
  return Decision::idle();
}

inline Decision phase2_decide(const Configuration& c, int i) {
  detail::require_domain(c);
  detail::require_occupied(c, i);
  for (const Segment& s : segments(c)) {
    if (s.length != 4) continue;
    const int n = c.size();
    const int inner_a = wrap(s.start + 1, n);
    const int inner_b = wrap(s.start + 2, n);
    const int node = wrap(i, n);
    if (node == inner_a) return Decision::try_move(inner_b);
    if (node == inner_b) return Decision::try_move(inner_a);
    return Decision::idle();
  }
  throw RingError("unsupported configuration: Phase II requires a 4-segment");
}

inline Decision phase3_decide(const Configuration& c, int i, Mutation mutation = Mutation::None) {
  detail::require_domain(c);
  detail::require_occupied(c, i);
  const auto arrow = find_arrow(c);
  if (!arrow) throw RingError("unsupported configuration: Phase III requires an arrow");
  if (arrow->size == c.size() - 3 || wrap(i, c.size()) != arrow->tail) return Decision::idle();
  const int away = mutation == Mutation::Phase3Reversed ? arrow->orientation : -arrow->orientation;
  return Decision::move(wrap(arrow->tail + away, c.size()));
}

inline Decision decide(const Configuration& c, int i, Mutation mutation = Mutation::None) {
  detail::require_domain(c);
  detail::require_occupied(c, i);
  const auto arrow = find_arrow(c);
  if (arrow && arrow->size == c.size() - 3) return Decision::idle();
  const bool four_segment = has_segment_of_length(c, 4);
  if (!arrow && !four_segment) {
    if (c.has_tower()) throw RingError("unsupported configuration: tower without an arrow");
    return phase1_decide(c, i, mutation);
  }
  if (four_segment) return phase2_decide(c, i);
  return phase3_decide(c, i, mutation);
}

// The protocol as a DecisionRule value, optionally with an injected fault.
struct FourRobotProtocol {
  Mutation mutation = Mutation::None;
  Decision operator()(const Configuration& c, int i) const { return decide(c, i, mutation); }
};

}  // namespace ringexp
