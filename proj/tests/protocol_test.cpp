#include <gtest/gtest.h>

#include <bit>
#include <functional>
#include <map>
#include <vector>

#include "ringexp/protocol.hpp"
#include "ringexp/verify.hpp"

using namespace ringexp;

namespace {

Configuration cfg(const char* text) { return Configuration::parse(text); }

std::vector<Configuration> towerless(int n) {
  std::vector<Configuration> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != 4) continue;
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = mask >> i & 1;
    out.emplace_back(d);
  }
  return out;
}

// Every configuration the protocol is defined on: towerless ones plus every
// arrow.
std::vector<Configuration> protocol_domain(int n) {
  auto out = towerless(n);
  for (int tower = 0; tower < n; ++tower) {
    for (int dir : {+1, -1}) {
      for (int size = 1; size <= n - 3; ++size) out.push_back(arrow_configuration(n, tower, dir, size));
    }
  }
  return out;
}

Decision mapped(Decision d, const std::function<int(int)>& f) {
  if (d.target) d.target = f(*d.target);
  return d;
}

}  // namespace

TEST(Decide, DispatchExamples) {
  for (int i : {0, 1, 2}) { EXPECT_EQ(decide(cfg("2,1,1,0,0,0,0,0,0"), i), Decision::idle()); }
  EXPECT_EQ(decide(cfg("1,0,2,1,0,0,0,0,0"), 0), Decision::move(8));
  EXPECT_EQ(decide(cfg("1,1,1,1,0,0,0,0,0"), 1), Decision::try_move(2));
}

TEST(Decide, DomainErrors) {
  EXPECT_THROW(decide(cfg("1,1,1,1,0,0,0,0"), 0), RingError);
  EXPECT_THROW(decide(cfg("1,1,1,0,0,0,0,0,0"), 0), RingError);
  EXPECT_THROW(decide(cfg("1,1,1,1,0,0,0,0,0"), 5), RingError);
  try {
    decide(cfg("2,0,0,2,0,0,0,0,0"), 0);
    FAIL() << "expected an error";
  } catch (const RingError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported configuration"), std::string::npos);
  }
  try {
    decide(cfg("1,1,1,1,0,0,0,0"), 0);
  } catch (const RingError& e) {
    EXPECT_NE(std::string(e.what()).find("out of protocol domain"), std::string::npos);
  }
}

TEST(PhaseOne, ThreeSegmentIsolatedRobotTakesShorterHole) {
  const auto c = cfg("1,1,1,0,0,1,0,0,0");
  EXPECT_EQ(phase1_decide(c, 5), Decision::move(4));
  for (int i : {0, 1, 2}) { EXPECT_EQ(phase1_decide(c, i), Decision::idle()); }
}

TEST(PhaseOne, ThreeSegmentTieLeavesTheEdgeToTheAdversary) {
  const auto c = cfg("1,1,1,0,0,0,1,0,0,0");
  EXPECT_EQ(phase1_decide(c, 6), Decision::move_either());
  EXPECT_TRUE(view_of(c, 6).symmetric());
}

TEST(PhaseOne, UniqueTwoSegmentClosestRobotMoves) {
  const auto c = cfg("1,1,0,1,0,0,1,0,0");
  EXPECT_EQ(phase1_decide(c, 3), Decision::move(2));
  EXPECT_EQ(phase1_decide(c, 6), Decision::idle());
  EXPECT_EQ(phase1_decide(c, 0), Decision::idle());
  EXPECT_EQ(phase1_decide(c, 1), Decision::idle());
}

TEST(PhaseOne, UniqueTwoSegmentEquidistantRobotsBothMove) {
  const auto c = cfg("1,1,0,1,0,0,0,1,0");
  EXPECT_EQ(phase1_decide(c, 3), Decision::move(2));
  EXPECT_EQ(phase1_decide(c, 7), Decision::move(8));
}

TEST(PhaseOne, TwoTwoSegmentsTryTheLongestHole) {
  const auto c = cfg("1,1,0,1,1,0,0,0,0");
  EXPECT_EQ(phase1_decide(c, 4), Decision::try_move(5));
  EXPECT_EQ(phase1_decide(c, 0), Decision::try_move(8));
  EXPECT_EQ(phase1_decide(c, 1), Decision::idle());
  EXPECT_EQ(phase1_decide(c, 3), Decision::idle());
}

TEST(PhaseOne, AllRobotsNextToLongestHole) {
  // Holes 2,1,2,1: each robot touches exactly one longest hole.
  const auto c = cfg("1,0,0,1,0,1,0,0,1,0");
  EXPECT_EQ(phase1_decide(c, 0), Decision::try_move(1));
  EXPECT_EQ(phase1_decide(c, 3), Decision::try_move(2));
  EXPECT_EQ(phase1_decide(c, 5), Decision::try_move(6));
  EXPECT_EQ(phase1_decide(c, 8), Decision::try_move(7));
}

TEST(PhaseOne, EqualHolesUseTheAdversaryOnSymmetricViews) {
  // Holes 2,2,2,2 on twelve nodes: every view is symmetric.
  const auto c = cfg("1,0,0,1,0,0,1,0,0,1,0,0");
  for (int i : c.occupied_nodes()) { EXPECT_EQ(phase1_decide(c, i), Decision::try_move_either()); }
}

TEST(PhaseOne, ThreeRobotsNextToLongestHole) {
  const auto c = cfg("1,0,0,1,0,0,1,0,1,0");
  EXPECT_EQ(phase1_decide(c, 0), Decision::move(9));
  EXPECT_EQ(phase1_decide(c, 6), Decision::move(7));
  EXPECT_EQ(phase1_decide(c, 3), Decision::idle());
  EXPECT_EQ(phase1_decide(c, 8), Decision::idle());
}

TEST(PhaseOne, TwoRobotsNextToLongestHole) {
  const auto c = cfg("1,0,0,1,0,1,0,1,0");
  EXPECT_EQ(phase1_decide(c, 0), Decision::move(8));
  EXPECT_EQ(phase1_decide(c, 3), Decision::move(4));
  EXPECT_EQ(phase1_decide(c, 5), Decision::idle());
  EXPECT_EQ(phase1_decide(c, 7), Decision::idle());
}

TEST(PhaseOne, RejectsTowersAndFourSegments) {
  EXPECT_THROW(phase1_decide(cfg("2,1,0,1,0,0,0,0,0"), 0), RingError);
  EXPECT_THROW(phase1_decide(cfg("1,1,1,1,0,0,0,0,0"), 0), RingError);
}

TEST(PhaseTwo, InnerRobotsTryToSwap) {
  const auto c = cfg("1,1,1,1,0,0,0,0,0");
  EXPECT_EQ(phase2_decide(c, 1), Decision::try_move(2));
  EXPECT_EQ(phase2_decide(c, 2), Decision::try_move(1));
  EXPECT_EQ(phase2_decide(c, 0), Decision::idle());
  EXPECT_EQ(phase2_decide(c, 3), Decision::idle());
  EXPECT_TRUE(is_primary_arrow(cfg("1,0,2,1,0,0,0,0,0")));
}

TEST(PhaseTwo, SegmentAcrossTheWrap) {
  const auto c = cfg("1,1,0,0,0,0,0,1,1");
  EXPECT_EQ(phase2_decide(c, 8), Decision::try_move(0));
  EXPECT_EQ(phase2_decide(c, 0), Decision::try_move(8));
  EXPECT_EQ(phase2_decide(c, 7), Decision::idle());
}

TEST(PhaseThree, TailWalksAwayFromTheTower) {
  EXPECT_EQ(phase3_decide(cfg("1,0,2,1,0,0,0,0,0"), 0), Decision::move(8));
  EXPECT_EQ(phase3_decide(cfg("0,0,2,1,0,0,0,0,1"), 8), Decision::move(7));
  EXPECT_EQ(phase3_decide(cfg("1,0,2,1,0,0,0,0,0"), 3), Decision::idle());
  EXPECT_EQ(phase3_decide(cfg("1,0,2,1,0,0,0,0,0"), 2), Decision::idle());
}

TEST(PhaseThree, ExactlyOneRobotActsOnNonFinalArrows) {
  for (int n = 9; n <= 12; ++n) {
    for (int tower = 0; tower < n; ++tower) {
      for (int dir : {+1, -1}) {
        for (int size = 1; size < n - 3; ++size) {
          const auto c = arrow_configuration(n, tower, dir, size);
          int acting = 0;
          for (int i : c.occupied_nodes()) acting += decide(c, i).is_idle() ? 0 : 1;
          EXPECT_EQ(acting, 1) << c.to_string();
        }
      }
    }
  }
}

TEST(Mutations, ChangeTheIntendedBranches) {
  const auto c = cfg("1,0,0,1,0,1,0,0,1,0");
  EXPECT_EQ(decide(c, 0, Mutation::Phase1IntoShortHoles), Decision::try_move(9));
  EXPECT_EQ(decide(cfg("1,0,2,1,0,0,0,0,0"), 0, Mutation::Phase3Reversed), Decision::move(1));
}

TEST(Anonymity, DecisionsCommuteWithRotationAndMirror) {
  for (int n : {9, 10}) {
    for (const auto& c : protocol_domain(n)) {
      for (int i : c.occupied_nodes()) {
        const Decision d = decide(c, i);
        for (int r = 0; r < n; ++r) {
          const auto shift = [&](int x) { return wrap(x - r, n); };
          ASSERT_EQ(decide(rotate(c, r), shift(i)), mapped(d, shift)) << c.to_string() << " @" << i << " r=" << r;
        }
        const auto reflect = [&](int x) { return wrap(-x, n); };
        ASSERT_EQ(decide(mirror(c), reflect(i)), mapped(d, reflect)) << c.to_string() << " @" << i;
      }
    }
  }
}

TEST(Anonymity, EqualViewsGiveEquivalentDecisions) {
  // Decisions expressed relative to the smaller orientation sequence must
  // agree across all nodes that share a view.
  for (int n : {9, 10}) {
    std::map<std::pair<std::vector<int>, std::vector<int>>, std::pair<Action, int>> seen;
    for (const auto& c : protocol_domain(n)) {
      for (int i : c.occupied_nodes()) {
        const View v = view_of(c, i);
        const Decision d = decide(c, i);
        int rel = 0;
        if (d.target) {
          const int dir = wrap(*d.target - i, n) == 1 ? +1 : -1;
          rel = v.symmetric() ? 2 : dir * v.smaller_side();
        }
        const auto [it, fresh] = seen.emplace(v.key(), std::make_pair(d.action, rel));
        if (!fresh) {
          ASSERT_EQ(it->second, std::make_pair(d.action, rel)) << c.to_string() << " @" << i;
        }
      }
    }
  }
}

TEST(Anonymity, AdversaryChoiceOnlyOnSymmetricViews) {
  for (int n : {9, 10, 11}) {
    for (const auto& c : protocol_domain(n)) {
      for (int i : c.occupied_nodes()) {
        const Decision d = decide(c, i);
        if (d.adversary_choice()) { EXPECT_TRUE(view_of(c, i).symmetric()) << c.to_string() << " @" << i; }
        if (view_of(c, i).symmetric() && !d.is_idle()) {
          EXPECT_TRUE(d.adversary_choice()) << c.to_string() << " @" << i;
        }
      }
    }
  }
}

TEST(Targets, MovingRobotsAimAtFreeNeighbors) {
  for (int n : {9, 10, 11}) {
    for (const auto& c : towerless(n)) {
      if (has_segment_of_length(c, 4)) continue;
      for (int i : c.occupied_nodes()) {
        const Decision d = decide(c, i);
        if (!d.target) continue;
        EXPECT_FALSE(c.occupied(*d.target)) << c.to_string() << " @" << i;
        EXPECT_TRUE(wrap(*d.target - i, n) == 1 || wrap(i - *d.target, n) == 1);
      }
    }
  }
}
