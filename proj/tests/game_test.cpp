#include <gtest/gtest.h>

#include <functional>
#include <vector>

#include "ringexp/game.hpp"
#include "ringexp/random.hpp"

using namespace ringexp;

namespace {

struct SmallGame {
  std::vector<bool> accepting;
  std::vector<std::vector<std::vector<int>>> actions;  // per state, per action: successors
};

BuchiGame build(const SmallGame& g) {
  BuchiGame game;
  for (bool a : g.accepting) game.add_state(a);
  for (std::size_t s = 0; s < g.actions.size(); ++s) {
    for (const auto& succ : g.actions[s]) game.add_action(static_cast<int>(s), succ);
  }
  return game;
}

// Oracle: the controller wins from s iff some memoryless strategy leaves the
// opponent unable to reach a dead end or a cycle of non-accepting states.
std::vector<bool> winning_by_strategy_enumeration(const SmallGame& g) {
  const std::size_t n = g.accepting.size();
  std::vector<bool> win(n, false);
  std::vector<std::size_t> choice(n, 0);
  while (true) {
    std::vector<std::vector<int>> edges(n);
    std::vector<bool> dead(n, false);
    for (std::size_t s = 0; s < n; ++s) {
      if (g.actions[s].empty()) {
        dead[s] = true;
      } else {
        edges[s] = g.actions[s][choice[s]];
      }
    }
    auto reach = [&](std::size_t from, const std::function<bool(std::size_t)>& allowed) {
      std::vector<bool> seen(n, false);
      std::vector<std::size_t> stack{from};
      while (!stack.empty()) {
        const auto s = stack.back();
        stack.pop_back();
        for (int t : edges[s]) {
          const auto u = static_cast<std::size_t>(t);
          if (!seen[u] && allowed(u)) {
            seen[u] = true;
            stack.push_back(u);
          }
        }
      }
      return seen;
    };
    std::vector<bool> bad_target = dead;
    for (std::size_t s = 0; s < n; ++s) {
      if (g.accepting[s]) continue;
      if (reach(s, [&](std::size_t u) { return !g.accepting[u]; })[s]) bad_target[s] = true;
    }
    for (std::size_t s = 0; s < n; ++s) {
      const auto r = reach(s, [](std::size_t) { return true; });
      bool bad = bad_target[s];
      for (std::size_t u = 0; u < n; ++u) bad = bad || (r[u] && bad_target[u]);
      if (!bad) win[s] = true;
    }
    std::size_t s = 0;
    while (s < n && (g.actions[s].empty() || ++choice[s] == g.actions[s].size())) choice[s++] = 0;
    if (s == n) break;
  }
  return win;
}

}  // namespace

TEST(BuchiGame, AcceptingSelfLoopWins) {
  const SmallGame g{{true}, {{{0}}}};
  EXPECT_EQ(build(g).solve().winning, std::vector<bool>{true});
}

TEST(BuchiGame, NonAcceptingSelfLoopLoses) {
  const SmallGame g{{false}, {{{0}}}};
  EXPECT_EQ(build(g).solve().winning, std::vector<bool>{false});
}

TEST(BuchiGame, OpponentPicksTheDeadEnd) {
  // 0 -a-> {1, 2}; 1 loops on an accepting state; 2 is a dead end.
  SmallGame g{{false, true, false}, {{{1, 2}}, {{1}}, {}}};
  EXPECT_EQ(build(g).solve().winning, (std::vector<bool>{false, true, false}));
  // A second action that avoids the dead end rescues state 0.
  g.actions[0].push_back({1});
  const auto game = build(g);
  const auto sol = game.solve();
  EXPECT_TRUE(sol.winning[0]);
  EXPECT_EQ(game.successors(sol.strategy[0]), std::vector<int>{1});
}

TEST(BuchiGame, MustRevisitAcceptingStates) {
  // From 0 the controller can loop on 0 forever or go through accepting 1.
  const SmallGame g{{false, true}, {{{0}, {1}}, {{0}}}};
  const auto game = build(g);
  const auto sol = game.solve();
  EXPECT_TRUE(sol.winning[0]);
  EXPECT_TRUE(sol.winning[1]);
  EXPECT_EQ(game.successors(sol.strategy[0]), std::vector<int>{1});
}

TEST(BuchiGame, AgreesWithStrategyEnumerationOnRandomGames) {
  Rng rng(31337);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 5));
    SmallGame g;
    g.accepting.resize(static_cast<std::size_t>(n));
    g.actions.resize(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
      g.accepting[static_cast<std::size_t>(s)] = uniform_below(rng, 3) == 0;
      const int actions = static_cast<int>(uniform_below(rng, 3));
      for (int a = 0; a < actions; ++a) {
        std::vector<int> succ;
        const int width = 1 + static_cast<int>(uniform_below(rng, 2));
        for (int w = 0; w < width; ++w) succ.push_back(static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n))));
        g.actions[static_cast<std::size_t>(s)].push_back(succ);
      }
    }
    const auto game = build(g);
    const auto sol = game.solve();
    ASSERT_EQ(sol.winning, winning_by_strategy_enumeration(g)) << "trial " << trial;
    for (int s = 0; s < n; ++s) {
      if (!sol.winning[static_cast<std::size_t>(s)]) continue;
      ASSERT_GE(sol.strategy[static_cast<std::size_t>(s)], 0);
      for (int t : game.successors(sol.strategy[static_cast<std::size_t>(s)])) {
        EXPECT_TRUE(sol.winning[static_cast<std::size_t>(t)]);
      }
    }
  }
}
