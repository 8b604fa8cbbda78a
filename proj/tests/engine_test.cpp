#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "ringexp/engine.hpp"
#include "ringexp/verify.hpp"

using namespace ringexp;

namespace {

Configuration cfg(const char* text) { return Configuration::parse(text); }

Adversary always_low() { return ScriptedAdversary({0}); }

}  // namespace

TEST(Swarm, IdsFollowNodeOrder) {
  const auto s = Swarm::from(cfg("1,0,2,1,0,0,0,0,0"));
  EXPECT_EQ(s.positions, (std::vector<int>{0, 2, 2, 3}));
  EXPECT_EQ(s.configuration(), cfg("1,0,2,1,0,0,0,0,0"));
}

TEST(Step, PhaseThreeTailMove) {
  Swarm s = Swarm::from(cfg("1,0,2,1,0,0,0,0,0"));
  Rng rng(1);
  Adversary adv = always_low();
  const auto rec = step(s, {0}, FourRobotProtocol{}, rng, adv);
  EXPECT_EQ(rec.after, cfg("0,0,2,1,0,0,0,0,1"));
  EXPECT_TRUE(rec.coins.empty());
  EXPECT_TRUE(rec.adversary.empty());
}

TEST(Step, PhaseTwoBothInnerRobotsMovingSwapPlaces) {
  Swarm s = Swarm::from(cfg("1,1,1,1,0,0,0,0,0"));
  const auto rec = resolved_step(s, {1, 2}, {{1, true}, {2, true}}, {}, FourRobotProtocol{});
  EXPECT_EQ(rec.after, rec.before);
  EXPECT_EQ(s.positions, (std::vector<int>{0, 2, 1, 3}));
}

TEST(Step, PhaseTwoOneMoverGivesPrimaryArrow) {
  Swarm s = Swarm::from(cfg("1,1,1,1,0,0,0,0,0"));
  const auto rec = resolved_step(s, {1, 2}, {{1, false}, {2, true}}, {}, FourRobotProtocol{});
  EXPECT_EQ(rec.after, cfg("1,2,0,1,0,0,0,0,0"));
  EXPECT_TRUE(is_primary_arrow(rec.after));
}

TEST(Step, EmptyActivationIsRejected) {
  Swarm s = Swarm::from(cfg("1,1,1,1,0,0,0,0,0"));
  Rng rng(1);
  Adversary adv = always_low();
  try {
    step(s, {}, FourRobotProtocol{}, rng, adv);
    FAIL();
  } catch (const RingError& e) {
    EXPECT_STREQ(e.what(), "scheduler violated nonemptiness");
  }
}

TEST(Step, ResolvedStepNeedsEveryRandomChoice) {
  Swarm s = Swarm::from(cfg("1,1,1,1,0,0,0,0,0"));
  EXPECT_THROW(resolved_step(s, {1}, {}, {}, FourRobotProtocol{}), RingError);
  Swarm t = Swarm::from(cfg("1,1,1,0,0,0,1,0,0,0"));
  EXPECT_THROW(resolved_step(t, {3}, {}, {}, FourRobotProtocol{}), RingError);
  const auto rec = resolved_step(t, {3}, {}, {{3, 7}}, FourRobotProtocol{});
  EXPECT_EQ(rec.after, cfg("1,1,1,0,0,0,0,1,0,0"));
}

TEST(Step, ConservesRobots) {
  Rng rng(99);
  Adversary adv = RandomAdversary(100);
  Swarm s = Swarm::from(sample_towerless(11, 4, rng));
  const auto policy = SchedulerPolicy::random_subset();
  for (int t = 0; t < 10'000; ++t) {
    if (is_terminal(s.configuration())) s = Swarm::from(sample_towerless(11, 4, rng));
    const auto rec = step(s, *policy.activation(t, 4, rng), FourRobotProtocol{}, rng, adv, t);
    ASSERT_EQ(rec.after.robots(), 4);
    ASSERT_EQ(rec.before.robots(), 4);
  }
}

TEST(Run, PrimaryArrowTerminatesAfterNMinusFourMoves) {
  for (int n = 9; n <= 15; ++n) {
    Rng rng(3);
    const auto initial = arrow_configuration(n, 2, +1, 1);
    const auto trace = resume(initial, SchedulerPolicy::round_robin(), FourRobotProtocol{}, rng, always_low());
    ASSERT_TRUE(trace.terminated);
    EXPECT_EQ(static_cast<int>(mrp(trace).size()) - 1, n - 4);
    // The node between tail and tower is only covered earlier, in phase two.
    EXPECT_EQ(trace.visited_count(), n - 1);
    EXPECT_TRUE(is_final_arrow(trace.final_configuration));
  }
}

TEST(Run, PrimaryArrowSizesIncreaseOneByOne) {
  Rng rng(3);
  const auto trace =
      resume(cfg("1,0,2,1,0,0,0,0,0"), SchedulerPolicy::round_robin(), FourRobotProtocol{}, rng, always_low());
  std::vector<int> sizes;
  for (const auto& c : mrp(trace)) sizes.push_back(find_arrow(c)->size);
  EXPECT_EQ(sizes, (std::vector<int>{1, 2, 3, 4, 5, 6}));
}

TEST(Run, RejectsTowerInitials) {
  Rng rng(1);
  EXPECT_THROW(run(cfg("1,0,2,1,0,0,0,0,0"), SchedulerPolicy::round_robin(), FourRobotProtocol{}, rng, always_low()),
               RingError);
}

TEST(Run, FourSegmentRandomSubsetCoversTheRing) {
  Rng rng(1);
  const auto trace =
      run(cfg("1,1,1,1,0,0,0,0,0"), SchedulerPolicy::random_subset(), FourRobotProtocol{}, rng, RandomAdversary(2));
  EXPECT_TRUE(trace.terminated);
  EXPECT_EQ(trace.visited_count(), 9);
}

TEST(Run, ZeroStepBudget) {
  Rng rng(1);
  const auto t = run(cfg("1,1,0,1,0,0,1,0,0"), SchedulerPolicy::round_robin(), FourRobotProtocol{}, rng, always_low(),
                     {0, true});
  EXPECT_EQ(t.step_count, 0);
  EXPECT_FALSE(t.terminated);
  EXPECT_EQ(t.status, RunStatus::StepLimit);
  const auto f = resume(cfg("2,1,1,0,0,0,0,0,0"), SchedulerPolicy::round_robin(), FourRobotProtocol{}, rng,
                        always_low(), {0, true});
  EXPECT_TRUE(f.terminated);
}

TEST(Run, ScriptExhaustionStopsTheRun) {
  Rng rng(1);
  const auto t = run(cfg("1,1,1,1,0,0,0,0,0"), SchedulerPolicy::scripted({{0}, {3}}), FourRobotProtocol{}, rng,
                     always_low());
  EXPECT_EQ(t.status, RunStatus::ScriptExhausted);
  EXPECT_EQ(t.step_count, 2);
  EXPECT_TRUE(t.sequential);
}

TEST(Run, IdenticalSeedsGiveIdenticalTraces) {
  for (const auto& policy : {SchedulerPolicy::random_subset(), SchedulerPolicy::sequential_random()}) {
    Rng a(77);
    Rng b(77);
    const auto initial = cfg("1,0,0,1,0,1,0,0,1,0,0,0");
    const auto ta = run(initial, policy, FourRobotProtocol{}, a, RandomAdversary(5));
    const auto tb = run(initial, policy, FourRobotProtocol{}, b, RandomAdversary(5));
    ASSERT_EQ(ta.steps.size(), tb.steps.size());
    for (std::size_t i = 0; i < ta.steps.size(); ++i) {
      EXPECT_EQ(ta.steps[i].activated, tb.steps[i].activated);
      EXPECT_EQ(ta.steps[i].coins, tb.steps[i].coins);
      EXPECT_EQ(ta.steps[i].adversary, tb.steps[i].adversary);
      EXPECT_EQ(ta.steps[i].after, tb.steps[i].after);
    }
  }
}

TEST(Scheduler, RandomSubsetIsFairInPractice) {
  Rng rng(4);
  const auto policy = SchedulerPolicy::random_subset();
  for (int window = 0; window < 200; ++window) {
    std::set<int> seen;
    for (int t = 0; t < 40; ++t) {
      const auto a = *policy.activation(t, 4, rng);
      ASSERT_FALSE(a.empty());
      seen.insert(a.begin(), a.end());
    }
    EXPECT_EQ(seen.size(), 4u);
  }
}

TEST(Scheduler, RoundRobinCyclesThroughRobots) {
  Rng rng(4);
  const auto policy = SchedulerPolicy::round_robin();
  for (int t = 0; t < 12; ++t) { EXPECT_EQ(*policy.activation(t, 4, rng), std::vector<int>{t % 4}); }
  EXPECT_THROW(SchedulerPolicy::parse("fifo"), RingError);
  EXPECT_EQ(SchedulerPolicy::parse("random-subset").name(), "random-subset");
}

TEST(Mrp, CollapsesRepeats) {
  const auto a = cfg("1,1,0");
  const auto b = cfg("1,0,1");
  EXPECT_EQ(mrp({a, a, b, b, a}), (std::vector<Configuration>{a, b, a}));
  EXPECT_EQ(mrp({a, a, a}).size(), 1u);
}

TEST(SampleTowerless, ForcedAndTowerless) {
  Rng rng(8);
  EXPECT_EQ(sample_towerless(4, 4, rng), cfg("1,1,1,1"));
  for (int i = 0; i < 10'000; ++i) {
    const auto c = sample_towerless(9, 4, rng);
    ASSERT_TRUE(c.towerless());
    ASSERT_EQ(c.robots(), 4);
  }
  EXPECT_THROW(sample_towerless(4, 5, rng), RingError);
}

TEST(SampleTowerless, ClassFrequenciesMatchSubsetCounts) {
  // Exact class sizes: the number of 4-subsets of 9 nodes in each class.
  std::map<Configuration, int> size;
  for (const auto& c : detail::towerless_configurations(9, 4)) ++size[canonical_form(c)];
  ASSERT_EQ(size.size(), 10u);
  Rng rng(2718);
  const int draws = 20'000;
  std::map<Configuration, int> hits;
  for (int i = 0; i < draws; ++i) ++hits[canonical_form(sample_towerless(9, 4, rng))];
  for (const auto& [cls, count] : size) {
    const double p = count / 126.0;
    const double mean = draws * p;
    const double sigma = std::sqrt(draws * p * (1 - p));
    EXPECT_LE(std::abs(hits[cls] - mean), 3 * sigma) << cls.to_string();
  }
}
