#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringexp/configuration.hpp"
#include "ringexp/decision.hpp"
#include "ringexp/protocol.hpp"
#include "ringexp/random.hpp"

namespace ringexp {

// Robots with engine-internal identities. Ids are handed out by increasing
// node index; robots sharing a tower get consecutive ids.
struct Swarm {
  int n = 0;
  std::vector<int> positions;

  static Swarm from(const Configuration& c) {
    Swarm s{c.size(), {}};
    for (int i = 0; i < c.size(); ++i) {
      for (int m = 0; m < c[i]; ++m) s.positions.push_back(i);
    }
    return s;
  }

  int robots() const { return static_cast<int>(positions.size()); }

  Configuration configuration() const {
    std::vector<int> d(static_cast<std::size_t>(n), 0);
    for (int p : positions) ++d[static_cast<std::size_t>(p)];
    return Configuration(std::move(d));
  }
};

// The two edges out of `node`, as neighbor nodes: decreasing side first.
inline std::array<int, 2> neighbors_of(int node, int n) { return {wrap(node - 1, n), wrap(node + 1, n)}; }

// Adversary for symmetric views: given the robot, the snapshot and both
// candidate neighbors, returns the neighbor to move to.
using Adversary = std::function<int(int robot, const Configuration&, std::array<int, 2> candidates)>;

class RandomAdversary {
 public:
  explicit RandomAdversary(std::uint64_t seed) : rng_(seed) {}
  int operator()(int, const Configuration&, std::array<int, 2> candidates) {
    return candidates[fair_coin(rng_) ? 1 : 0];
  }

 private:
  Rng rng_;
};

// Replays a fixed list of candidate indices (0 = decreasing side,
// 1 = increasing side), cycling when exhausted.
class ScriptedAdversary {
 public:
  explicit ScriptedAdversary(std::vector<int> picks) : picks_(std::move(picks)) {
    if (picks_.empty()) throw RingError("scripted adversary needs at least one pick");
  }
  int operator()(int, const Configuration&, std::array<int, 2> candidates) {
    const int pick = picks_[next_++ % picks_.size()];
    return candidates[pick ? 1 : 0];
  }

 private:
  std::vector<int> picks_;
  std::size_t next_ = 0;
};

// One way a robot's decision can play out in a step.
struct Resolution {
  std::optional<bool> coin;  // set for TryMove
  std::optional<int> pick;   // adversary-chosen neighbor, when it was asked
  int destination = 0;
  bool moves(int from) const { return destination != from; }
};

inline std::vector<Resolution> resolutions(const Decision& d, int node, int n) {
  std::vector<Resolution> out;
  const auto cand = neighbors_of(node, n);
  auto moving = [&](std::optional<bool> coin) {
    if (d.target) {
      out.push_back({coin, std::nullopt, *d.target});
    } else {
      for (int c : cand) out.push_back({coin, c, c});
    }
  };
  switch (d.action) {
    case Action::Idle:
      out.push_back({std::nullopt, std::nullopt, node});
      break;
    case Action::Move:
      moving(std::nullopt);
      break;
    case Action::TryMove:
      out.push_back({false, std::nullopt, node});
      moving(true);
      break;
  }
  return out;
}

struct StepRecord {
  std::int64_t t = 0;
  std::vector<int> activated;  // robot ids, increasing
  std::map<int, bool> coins;
  std::map<int, int> adversary;  // robot -> neighbor chosen by the adversary
  Configuration before;
  Configuration after;
};

template <DecisionRule P>
bool is_terminal(const Configuration& c, const P& protocol) {
  for (int i : c.occupied_nodes()) {
    if (!Decision(protocol(c, i)).is_idle()) return false;
  }
  return true;
}

inline bool is_terminal(const Configuration& c) { return is_terminal(c, FourRobotProtocol{}); }

namespace detail {

inline void check_activation(const Swarm& swarm, const std::vector<int>& activation) {
  if (activation.empty()) throw RingError("scheduler violated nonemptiness");
  for (int r : activation) {
    if (r < 0 || r >= swarm.robots()) throw RingError("activation names unknown robot " + std::to_string(r));
  }
}

}  // namespace detail

// Moves every robot to the destination chosen for it, all at once.
inline void apply_moves(Swarm& swarm, const std::map<int, int>& destinations) {
  for (auto [robot, dest] : destinations) swarm.positions[static_cast<std::size_t>(robot)] = dest;
}

// One atomic Look-Compute-Move round for the activated robots: every robot
// computes on the same snapshot, then all moves land simultaneously.
template <DecisionRule P>
StepRecord step(Swarm& swarm, std::vector<int> activation, const P& protocol, Rng& rng, Adversary& adversary,
                std::int64_t t = 0) {
  detail::check_activation(swarm, activation);
  std::sort(activation.begin(), activation.end());
  activation.erase(std::unique(activation.begin(), activation.end()), activation.end());

  StepRecord rec;
  rec.t = t;
  rec.activated = activation;
  rec.before = swarm.configuration();

  std::map<int, int> destinations;
  for (int r : activation) {
    const int node = swarm.positions[static_cast<std::size_t>(r)];
    const Decision d = protocol(rec.before, node);
    if (d.is_idle()) continue;
    if (d.action == Action::TryMove) {
      const bool coin = fair_coin(rng);
      rec.coins[r] = coin;
      if (!coin) continue;
    }
    int dest = 0;
    if (d.target) {
      dest = *d.target;
    } else {
      const auto cand = neighbors_of(node, swarm.n);
      dest = adversary(r, rec.before, cand);
      if (dest != cand[0] && dest != cand[1]) throw RingError("adversary picked a non-neighbor");
      rec.adversary[r] = dest;
    }
    destinations[r] = dest;
  }
  apply_moves(swarm, destinations);
  rec.after = swarm.configuration();
  return rec;
}

// Replays a step whose coin flips and adversary picks are already known.
// Throws if the record does not cover a random choice the protocol makes.
template <DecisionRule P>
StepRecord resolved_step(Swarm& swarm, std::vector<int> activation, const std::map<int, bool>& coins,
                         const std::map<int, int>& picks, const P& protocol, std::int64_t t = 0) {
  detail::check_activation(swarm, activation);
  std::sort(activation.begin(), activation.end());
  activation.erase(std::unique(activation.begin(), activation.end()), activation.end());

  StepRecord rec;
  rec.t = t;
  rec.activated = activation;
  rec.before = swarm.configuration();
  std::map<int, int> destinations;
  for (int r : activation) {
    const int node = swarm.positions[static_cast<std::size_t>(r)];
    const Decision d = protocol(rec.before, node);
    if (d.is_idle()) continue;
    if (d.action == Action::TryMove) {
      auto it = coins.find(r);
      if (it == coins.end()) throw RingError("missing coin for robot " + std::to_string(r));
      rec.coins[r] = it->second;
      if (!it->second) continue;
    }
    if (d.target) {
      destinations[r] = *d.target;
      continue;
    }
    auto it = picks.find(r);
    const auto cand = neighbors_of(node, swarm.n);
    if (it == picks.end() || (it->second != cand[0] && it->second != cand[1])) {
      throw RingError("missing or invalid adversary pick for robot " + std::to_string(r));
    }
    rec.adversary[r] = it->second;
    destinations[r] = it->second;
  }
  apply_moves(swarm, destinations);
  rec.after = swarm.configuration();
  return rec;
}

enum class SchedulerMode { SequentialRoundRobin, SequentialRandom, RandomSubset, Scripted };

struct SchedulerPolicy {
  SchedulerMode mode = SchedulerMode::RandomSubset;
  std::vector<std::vector<int>> script;

  static SchedulerPolicy round_robin() { return {SchedulerMode::SequentialRoundRobin, {}}; }
  static SchedulerPolicy sequential_random() { return {SchedulerMode::SequentialRandom, {}}; }
  static SchedulerPolicy random_subset() { return {SchedulerMode::RandomSubset, {}}; }
  static SchedulerPolicy scripted(std::vector<std::vector<int>> s) { return {SchedulerMode::Scripted, std::move(s)}; }

  static SchedulerPolicy parse(const std::string& name) {
    if (name == "round-robin") return round_robin();
    if (name == "sequential-random") return sequential_random();
    if (name == "random-subset") return random_subset();
    throw RingError("unknown scheduler policy \"" + name + "\" (round-robin, sequential-random, random-subset)");
  }

  std::string name() const {
    switch (mode) {
      case SchedulerMode::SequentialRoundRobin:
        return "round-robin";
      case SchedulerMode::SequentialRandom:
        return "sequential-random";
      case SchedulerMode::RandomSubset:
        return "random-subset";
      case SchedulerMode::Scripted:
        return "scripted";
    }
    return "?";
  }

  bool sequential() const {
    if (mode == SchedulerMode::Scripted) {
      return std::all_of(script.begin(), script.end(), [](const auto& a) { return a.size() == 1; });
    }
    return mode != SchedulerMode::RandomSubset;
  }

  // Activation for step t, or nothing once a script runs out.
  std::optional<std::vector<int>> activation(std::int64_t t, int robots, Rng& rng) const {
    switch (mode) {
      case SchedulerMode::SequentialRoundRobin:
        return std::vector<int>{static_cast<int>(t % robots)};
      case SchedulerMode::SequentialRandom:
        return std::vector<int>{static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(robots)))};
      case SchedulerMode::RandomSubset: {
        const std::uint64_t mask = 1 + uniform_below(rng, (std::uint64_t{1} << robots) - 1);
        std::vector<int> out;
        for (int r = 0; r < robots; ++r) {
          if (mask >> r & 1) out.push_back(r);
        }
        return out;
      }
      case SchedulerMode::Scripted:
        if (static_cast<std::size_t>(t) >= script.size()) return std::nullopt;
        return script[static_cast<std::size_t>(t)];
    }
    return std::nullopt;
  }
};

enum class RunStatus { Terminated, StepLimit, ScriptExhausted };

inline std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Terminated:
      return "terminated";
    case RunStatus::StepLimit:
      return "step-limit";
    case RunStatus::ScriptExhausted:
      return "script-exhausted";
  }
  return "?";
}

struct RunOptions {
  std::int64_t max_steps = 1'000'000;
  bool record_steps = true;
};

struct Trace {
  Configuration initial;
  std::vector<StepRecord> steps;
  std::vector<bool> visited;
  bool terminated = false;
  std::int64_t step_count = 0;
  RunStatus status = RunStatus::StepLimit;
  Configuration final_configuration;
  bool sequential = true;

  bool all_visited() const { return std::all_of(visited.begin(), visited.end(), [](bool v) { return v; }); }
  int visited_count() const { return static_cast<int>(std::count(visited.begin(), visited.end(), true)); }

  // Configuration sequence gamma_0, gamma_1, ... (needs recorded steps).
  std::vector<Configuration> configurations() const {
    std::vector<Configuration> out{initial};
    for (const auto& s : steps) out.push_back(s.after);
    return out;
  }
};

// Runs from any configuration the protocol can handle, without the
// towerless requirement on the starting point.
template <DecisionRule P>
Trace resume(const Configuration& initial, const SchedulerPolicy& policy, const P& protocol, Rng& rng,
             Adversary adversary, const RunOptions& options = {}) {
  Trace trace;
  trace.initial = initial;
  trace.visited.assign(static_cast<std::size_t>(initial.size()), false);
  for (int i : initial.occupied_nodes()) trace.visited[static_cast<std::size_t>(i)] = true;

  Swarm swarm = Swarm::from(initial);
  Configuration current = initial;
  trace.status = RunStatus::StepLimit;
  for (std::int64_t t = 0;; ++t) {
    if (is_terminal(current, protocol)) {
      trace.status = RunStatus::Terminated;
      break;
    }
    if (t >= options.max_steps) break;
    auto activation = policy.activation(t, swarm.robots(), rng);
    if (!activation) {
      trace.status = RunStatus::ScriptExhausted;
      break;
    }
    if (activation->size() != 1) trace.sequential = false;
    StepRecord rec = step(swarm, std::move(*activation), protocol, rng, adversary, t);
    current = rec.after;
    for (int p : swarm.positions) trace.visited[static_cast<std::size_t>(p)] = true;
    ++trace.step_count;
    if (options.record_steps) trace.steps.push_back(std::move(rec));
  }
  trace.terminated = trace.status == RunStatus::Terminated;
  trace.final_configuration = current;
  return trace;
}

template <DecisionRule P>
Trace run(const Configuration& initial, const SchedulerPolicy& policy, const P& protocol, Rng& rng,
          Adversary adversary, const RunOptions& options = {}) {
  if (initial.has_tower()) throw RingError("initial configuration must be towerless");
  return resume(initial, policy, protocol, rng, std::move(adversary), options);
}

// Collapses consecutive identical configurations.
inline std::vector<Configuration> mrp(const std::vector<Configuration>& sequence) {
  std::vector<Configuration> out;
  for (const auto& c : sequence) {
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return out;
}

inline std::vector<Configuration> mrp(const Trace& trace) { return mrp(trace.configurations()); }

// k distinct nodes, uniform over all C(n, k) subsets.
inline Configuration sample_towerless(int n, int k, Rng& rng) {
  RingSpec{n, k}.validate();
  std::vector<int> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) nodes[static_cast<std::size_t>(i)] = i;
  std::vector<int> d(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < k; ++j) {
    const auto pick = j + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - j)));
    std::swap(nodes[static_cast<std::size_t>(j)], nodes[static_cast<std::size_t>(pick)]);
    d[static_cast<std::size_t>(nodes[static_cast<std::size_t>(j)])] = 1;
  }
  return Configuration(std::move(d));
}

}  // namespace ringexp
