#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringexp/engine.hpp"
#include "ringexp/parallel.hpp"
#include "ringexp/protocol.hpp"
#include "ringexp/structure.hpp"
#include "ringexp/trace_io.hpp"

namespace ringexp {

struct Violation {
  std::string message;
  std::optional<StepRecord> step;  // fully resolved, replayable with resolved_step
};

struct CheckReport {
  std::string claim;
  std::int64_t configurations = 0;
  std::int64_t instances_checked = 0;
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }

  void merge(CheckReport other) {
    configurations += other.configurations;
    instances_checked += other.instances_checked;
    for (auto& v : other.violations) violations.push_back(std::move(v));
  }
};

inline ordered_json to_json(const CheckReport& r, std::size_t max_counterexamples = 10) {
  ordered_json j;
  j["claim"] = r.claim;
  j["passed"] = r.passed();
  j["configurations"] = r.configurations;
  j["instances_checked"] = r.instances_checked;
  j["violation_count"] = r.violations.size();
  ordered_json ce = ordered_json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < max_counterexamples; ++i) {
    ordered_json v;
    v["message"] = r.violations[i].message;
    if (const auto& s = r.violations[i].step) {
      v["before"] = s->before.to_string();
      auto rec = step_json(*s);
      v["activated"] = rec["activated"];
      v["coins"] = rec["coins"];
      v["adversary"] = rec["adversary"];
      v["after"] = s->after.to_string();
    }
    ce.push_back(v);
  }
  j["counterexamples"] = ce;
  return j;
}

struct ExhaustiveOptions {
  // Exhaustive instance spaces grow like C(n,4) * 2^4 * branching; rings
  // above this size need an explicit opt-in.
  static constexpr int kDefaultMaxNodes = 12;
  bool allow_large = false;
  int threads = 1;
};

namespace detail {

inline void check_exhaustive_size(int n, const ExhaustiveOptions& opt) {
  if (n < kMinProtocolNodes) throw RingError("out of protocol domain: requires n > 8");
  if (n > ExhaustiveOptions::kDefaultMaxNodes && !opt.allow_large) {
    throw RingError("exhaustive checks are capped at n <= 12 unless allow_large is set");
  }
}

// Towerless configurations of k robots on n nodes, in increasing bitmask order.
inline std::vector<Configuration> towerless_configurations(int n, int k) {
  std::vector<Configuration> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = (mask >> i) & 1;
    out.emplace_back(std::move(d));
  }
  return out;
}

// Every resolution (coins and adversary picks) of one activation of the
// robots of c, as replayable step records.
template <DecisionRule P, typename Visit>
void for_each_branch(const Configuration& c, const std::vector<int>& activation, const P& protocol, Visit&& visit) {
  const Swarm base = Swarm::from(c);
  std::vector<std::vector<Resolution>> options;
  for (int r : activation) {
    const int node = base.positions[static_cast<std::size_t>(r)];
    options.push_back(resolutions(protocol(c, node), node, c.size()));
  }
  std::vector<std::size_t> choice(options.size(), 0);
  while (true) {
    std::map<int, bool> coins;
    std::map<int, int> picks;
    for (std::size_t a = 0; a < activation.size(); ++a) {
      const Resolution& res = options[a][choice[a]];
      if (res.coin) coins[activation[a]] = *res.coin;
      if (res.pick) picks[activation[a]] = *res.pick;
    }
    Swarm swarm = base;
    visit(resolved_step(swarm, activation, coins, picks, protocol));
    std::size_t a = 0;
    while (a < choice.size() && ++choice[a] == options[a].size()) choice[a++] = 0;
    if (a == choice.size()) break;
  }
}

// All nonempty subsets of robot ids 0..k-1.
inline std::vector<std::vector<int>> activations(int k) {
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> a;
    for (int r = 0; r < k; ++r) {
      if (mask >> r & 1) a.push_back(r);
    }
    out.push_back(std::move(a));
  }
  return out;
}

inline Configuration place(int n, std::initializer_list<std::pair<int, int>> cells) {
  std::vector<int> d(static_cast<std::size_t>(n), 0);
  for (auto [node, m] : cells) d[static_cast<std::size_t>(wrap(node, n))] += m;
  return Configuration(std::move(d));
}

}  // namespace detail

// Arrow with its tower at `tower`, head at tower + orientation, and `size`
// free nodes between tower and tail.
inline Configuration arrow_configuration(int n, int tower, int orientation, int size) {
  return detail::place(n, {{tower, 2}, {tower + orientation, 1}, {tower - orientation * (size + 1), 1}});
}

// From any towerless configuration without a 4-segment, no resolution of any
// activation creates a tower.
template <DecisionRule P = FourRobotProtocol>
CheckReport check_no_tower_one_step(int n, const P& protocol = {}, const ExhaustiveOptions& opt = {}) {
  detail::check_exhaustive_size(n, opt);
  std::vector<Configuration> bases;
  for (auto& c : detail::towerless_configurations(n, kProtocolRobots)) {
    if (!has_segment_of_length(c, 4)) bases.push_back(std::move(c));
  }
  const auto acts = detail::activations(kProtocolRobots);
  auto parts = parallel_map<CheckReport>(bases.size(), opt.threads, [&](std::size_t b) {
    CheckReport part;
    part.configurations = 1;
    const Configuration& c = bases[b];
    for (const auto& a : acts) {
      try {
        detail::for_each_branch(c, a, protocol, [&](const StepRecord& s) {
          ++part.instances_checked;
          if (s.after.has_tower()) part.violations.push_back({"tower created", s});
        });
      } catch (const RingError& e) {
        part.violations.push_back({std::string("protocol error: ") + e.what(), std::nullopt});
      }
    }
    return part;
  });
  CheckReport report{"no-tower-one-step", 0, 0, {}};
  for (auto& p : parts) report.merge(std::move(p));
  return report;
}

// From a 4-segment s..s+3, every successor is the same configuration or the
// primary arrow on s..s+3.
template <DecisionRule P = FourRobotProtocol>
CheckReport check_four_segment_step(int n, const P& protocol = {}, const ExhaustiveOptions& opt = {}) {
  detail::check_exhaustive_size(n, opt);
  CheckReport report{"four-segment-step", 0, 0, {}};
  const auto acts = detail::activations(kProtocolRobots);
  for (int s = 0; s < n; ++s) {
    const Configuration c = detail::place(n, {{s, 1}, {s + 1, 1}, {s + 2, 1}, {s + 3, 1}});
    const Configuration arrow_a = detail::place(n, {{s, 1}, {s + 2, 2}, {s + 3, 1}});
    const Configuration arrow_b = detail::place(n, {{s, 1}, {s + 1, 2}, {s + 3, 1}});
    ++report.configurations;
    for (const auto& a : acts) {
      try {
        detail::for_each_branch(c, a, protocol, [&](const StepRecord& st) {
          ++report.instances_checked;
          if (st.after == c) return;
          if ((st.after == arrow_a || st.after == arrow_b) && is_primary_arrow(st.after)) return;
          report.violations.push_back({"successor is neither the 4-segment nor its primary arrow", st});
        });
      } catch (const RingError& e) {
        report.violations.push_back({std::string("protocol error: ") + e.what(), std::nullopt});
      }
    }
  }
  return report;
}

// Every non-final arrow grows by exactly one when its tail is activated and
// is unchanged otherwise; each primary arrow needs exactly n - 4 tail moves
// to become final and terminal.
template <DecisionRule P = FourRobotProtocol>
CheckReport check_phase3_monotone(int n, const P& protocol = {}, const ExhaustiveOptions& opt = {}) {
  detail::check_exhaustive_size(n, opt);
  CheckReport report{"phase3-monotone", 0, 0, {}};
  const auto acts = detail::activations(kProtocolRobots);
  for (int tower = 0; tower < n; ++tower) {
    for (int dir : {+1, -1}) {
      for (int size = 1; size <= n - 4; ++size) {
        const Configuration c = arrow_configuration(n, tower, dir, size);
        const int tail = wrap(tower - dir * (size + 1), n);
        const Swarm robots = Swarm::from(c);
        ++report.configurations;
        for (const auto& a : acts) {
          try {
            detail::for_each_branch(c, a, protocol, [&](const StepRecord& st) {
              ++report.instances_checked;
              bool tail_active = false;
              for (int r : a) tail_active |= robots.positions[static_cast<std::size_t>(r)] == tail;
              if (!tail_active) {
                if (st.after != c) report.violations.push_back({"non-tail activation changed the arrow", st});
                return;
              }
              const auto next = find_arrow(st.after);
              if (!next || next->size != size + 1 || next->tower != tower || next->head != wrap(tower + dir, n)) {
                report.violations.push_back({"tail move did not grow the arrow by one", st});
              }
            });
          } catch (const RingError& e) {
            report.violations.push_back({std::string("protocol error: ") + e.what(), std::nullopt});
          }
        }
      }
      // Walk the primary arrow to its fixpoint, activating only the tail.
      Swarm swarm = Swarm::from(arrow_configuration(n, tower, dir, 1));
      int moves = 0;
      try {
        for (int guard = 0; guard <= n; ++guard) {
          const Configuration c = swarm.configuration();
          if (is_terminal(c, protocol)) break;
          const auto arrow = find_arrow(c);
          if (!arrow) {
            report.violations.push_back({"arrow lost during Phase III walk: " + c.to_string(), std::nullopt});
            break;
          }
          int tail_robot = 0;
          while (swarm.positions[static_cast<std::size_t>(tail_robot)] != arrow->tail) ++tail_robot;
          const auto st = resolved_step(swarm, {tail_robot}, {}, {}, protocol);
          if (st.after != st.before) ++moves;
        }
        const Configuration last = swarm.configuration();
        ++report.instances_checked;
        if (moves != n - 4 || !is_final_arrow(last) || !is_terminal(last, protocol)) {
          report.violations.push_back({"primary arrow at tower " + std::to_string(tower) + " reached " +
                                           last.to_string() + " after " + std::to_string(moves) +
                                           " tail moves (expected " + std::to_string(n - 4) + ")",
                                       std::nullopt});
        }
      } catch (const RingError& e) {
        report.violations.push_back({std::string("protocol error: ") + e.what(), std::nullopt});
      }
    }
  }
  return report;
}

inline bool has_small_tower(const Configuration& c, int k) {
  const auto& d = c.multiplicities();
  return std::any_of(d.begin(), d.end(), [k](int m) { return m >= 2 && m < k; });
}

// Lower bounds on the minimal relevant prefix of a terminating sequential
// computation: at least n-k+1 entries overall, with a tower, with a tower of
// fewer than k robots, and pairwise distinguishable among the latter.
inline CheckReport check_mrp_bounds(const Trace& trace, int n, int k) {
  if (!trace.sequential) throw RingError("lemma applies to sequential computations");
  if (!trace.terminated) throw RingError("lemma applies to terminating computations");
  const auto prefix = mrp(trace);
  const std::int64_t bound = n - k + 1;
  std::int64_t towers = 0;
  std::int64_t small = 0;
  std::set<Configuration> classes;
  for (const auto& c : prefix) {
    if (c.has_tower()) ++towers;
    if (has_small_tower(c, k)) {
      ++small;
      classes.insert(canonical_form(c));
    }
  }
  CheckReport report{"mrp-bounds", 1, 1, {}};
  auto expect = [&](std::int64_t value, const std::string& what) {
    if (value < bound) {
      report.violations.push_back({what + " = " + std::to_string(value) + " < " + std::to_string(bound) +
                                       " (initial " + trace.initial.to_string() + ")",
                                   std::nullopt});
    }
  };
  expect(static_cast<std::int64_t>(prefix.size()), "MRP length");
  expect(towers, "MRP entries with a tower");
  expect(small, "MRP entries with a tower of fewer than k robots");
  expect(static_cast<std::int64_t>(classes.size()), "distinguishable MRP entries with a small tower");
  return report;
}

// Number of indistinguishability classes of k-robot configurations on n
// nodes containing a tower of fewer than k robots.
inline int count_tower_classes(int n, int k) {
  RingSpec{n, std::min(k, n)}.validate();
  std::set<Configuration> classes;
  std::vector<int> d(static_cast<std::size_t>(n), 0);
  auto fill = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      d[static_cast<std::size_t>(i)] = left;
      Configuration c(d);
      if (has_small_tower(c, k)) classes.insert(canonical_form(c));
      return;
    }
    for (int m = 0; m <= left; ++m) {
      d[static_cast<std::size_t>(i)] = m;
      self(self, i + 1, left - m);
    }
  };
  fill(fill, 0, k);
  return static_cast<int>(classes.size());
}

// Per-step phase invariants of one run of the four-robot protocol.
inline std::vector<std::string> run_invariant_violations(const Trace& trace) {
  std::vector<std::string> out;
  for (const auto& s : trace.steps) {
    const Configuration& b = s.before;
    const Configuration& a = s.after;
    if (a.robots() != b.robots()) out.push_back("robot count changed at t=" + std::to_string(s.t));
    const auto arrow_before = find_arrow(b);
    const auto segs = segments(b);
    const auto four = std::find_if(segs.begin(), segs.end(), [](const Segment& g) { return g.length == 4; });
    if (four != segs.end()) {
      if (a == b) continue;
      bool same_nodes = true;
      for (int i : a.occupied_nodes()) same_nodes &= wrap(i - four->start, b.size()) < 4;
      if (!(is_primary_arrow(a) && same_nodes)) out.push_back("4-segment left to " + a.to_string());
    } else if (arrow_before) {
      const auto arrow_after = find_arrow(a);
      const int expected = a == b ? arrow_before->size : arrow_before->size + 1;
      if (!arrow_after || arrow_after->size != expected) {
        out.push_back("arrow " + b.to_string() + " became " + a.to_string());
      }
    } else if (a.has_tower()) {
      out.push_back("tower created from " + b.to_string() + " to " + a.to_string());
    }
  }
  return out;
}

struct CampaignOptions {
  std::int64_t max_steps = 100'000;
  int threads = 1;
  Mutation mutation = Mutation::None;
};

struct CampaignStats {
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string policy;
  int terminated_count = 0;
  int full_coverage_count = 0;
  int final_arrow_count = 0;
  int error_count = 0;
  std::int64_t invariant_violations = 0;
  std::int64_t mrp_violations = 0;
  std::int64_t steps_min = 0;
  std::int64_t steps_median = 0;
  double steps_mean = 0.0;
  std::int64_t steps_max = 0;
  std::vector<std::string> notes;  // first few failures, for diagnosis

  bool all_passed() const {
    return terminated_count == trials && full_coverage_count == trials && final_arrow_count == trials &&
           error_count == 0 && invariant_violations == 0 && mrp_violations == 0;
  }
};

inline ordered_json to_json(const CampaignStats& s) {
  ordered_json j;
  j["n"] = s.n;
  j["k"] = kProtocolRobots;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  j["policy"] = s.policy;
  j["terminated_count"] = s.terminated_count;
  j["full_coverage_count"] = s.full_coverage_count;
  j["final_arrow_count"] = s.final_arrow_count;
  j["error_count"] = s.error_count;
  j["invariant_violations"] = s.invariant_violations;
  j["mrp_violations"] = s.mrp_violations;
  j["steps"] = {{"min", s.steps_min}, {"median", s.steps_median}, {"mean", s.steps_mean}, {"max", s.steps_max}};
  j["notes"] = s.notes;
  j["passed"] = s.all_passed();
  return j;
}

struct TrialOutcome {
  bool terminated = false;
  bool covered = false;
  bool final_arrow = false;
  bool error = false;
  std::int64_t steps = 0;
  std::int64_t invariant_violations = 0;
  std::int64_t mrp_violations = 0;
  std::string note;
};

// Trial i runs from sample_towerless with seed derive_seed(seed, i) and a
// random adversary seeded from that trial seed.
inline TrialOutcome campaign_trial(int n, const SchedulerPolicy& policy, std::uint64_t seed, std::uint64_t trial,
                                   const CampaignOptions& opt) {
  TrialOutcome out;
  const std::uint64_t trial_seed = derive_seed(seed, trial);
  Rng rng(trial_seed);
  const Configuration initial = sample_towerless(n, kProtocolRobots, rng);
  try {
    const Trace trace = run(initial, policy, FourRobotProtocol{opt.mutation}, rng,
                            RandomAdversary(derive_seed(trial_seed, 1)), {opt.max_steps, true});
    out.terminated = trace.terminated;
    out.covered = trace.terminated && trace.all_visited();
    out.final_arrow = trace.terminated && is_final_arrow(trace.final_configuration);
    out.steps = trace.step_count;
    const auto inv = run_invariant_violations(trace);
    out.invariant_violations = static_cast<std::int64_t>(inv.size());
    if (!inv.empty()) out.note = "trial " + std::to_string(trial) + ": " + inv.front();
    if (policy.sequential() && trace.terminated) {
      const auto rep = check_mrp_bounds(trace, n, kProtocolRobots);
      out.mrp_violations = static_cast<std::int64_t>(rep.violations.size());
      if (!rep.passed() && out.note.empty()) out.note = "trial " + std::to_string(trial) + ": " + rep.violations[0].message;
    }
    if (!out.terminated && out.note.empty()) {
      out.note = "trial " + std::to_string(trial) + ": no termination within " + std::to_string(opt.max_steps) +
                 " steps from " + initial.to_string();
    }
  } catch (const RingError& e) {
    out.error = true;
    out.note = "trial " + std::to_string(trial) + " from " + initial.to_string() + ": " + e.what();
  }
  return out;
}

inline CampaignStats campaign(int n, int trials, const SchedulerPolicy& policy, std::uint64_t seed,
                              const CampaignOptions& opt = {}) {
  if (n < kMinProtocolNodes) throw RingError("out of protocol domain: requires n > 8");
  if (trials < 1) throw RingError("campaign needs at least one trial");
  const auto outcomes = parallel_map<TrialOutcome>(static_cast<std::size_t>(trials), opt.threads, [&](std::size_t i) {
    return campaign_trial(n, policy, seed, i, opt);
  });
  CampaignStats s;
  s.n = n;
  s.trials = trials;
  s.seed = seed;
  s.policy = policy.name();
  std::vector<std::int64_t> steps;
  for (const auto& o : outcomes) {
    s.terminated_count += o.terminated;
    s.full_coverage_count += o.covered;
    s.final_arrow_count += o.final_arrow;
    s.error_count += o.error;
    s.invariant_violations += o.invariant_violations;
    s.mrp_violations += o.mrp_violations;
    steps.push_back(o.steps);
    if (!o.note.empty() && s.notes.size() < 5) s.notes.push_back(o.note);
  }
  std::sort(steps.begin(), steps.end());
  s.steps_min = steps.front();
  s.steps_max = steps.back();
  s.steps_median = steps[steps.size() / 2];
  s.steps_mean = static_cast<double>(std::accumulate(steps.begin(), steps.end(), std::int64_t{0})) /
                 static_cast<double>(steps.size());
  return s;
}

// MRP bounds over `traces` sequential round-robin runs from random towerless
// starts.
inline CheckReport check_mrp_batch(int n, int traces, std::uint64_t seed, std::int64_t max_steps = 100'000) {
  CheckReport report{"mrp-bounds", 0, 0, {}};
  for (int i = 0; i < traces; ++i) {
    const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    Rng rng(trial_seed);
    const Configuration initial = sample_towerless(n, kProtocolRobots, rng);
    const Trace trace = run(initial, SchedulerPolicy::round_robin(), FourRobotProtocol{}, rng,
                            RandomAdversary(derive_seed(trial_seed, 1)), {max_steps, true});
    if (!trace.terminated) {
      report.violations.push_back({"run from " + initial.to_string() + " did not terminate", std::nullopt});
      continue;
    }
    report.merge(check_mrp_bounds(trace, n, kProtocolRobots));
  }
  return report;
}

}  // namespace ringexp
