#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ringexp/configuration.hpp"
#include "ringexp/decision.hpp"
#include "ringexp/game.hpp"
#include "ringexp/parallel.hpp"
#include "ringexp/view.hpp"

// Exhaustive refutation of every support-level protocol for three robots on
// a four-node ring.
//
// A support-level protocol maps each view class to the set of outcomes it
// assigns strictly positive probability. For an asymmetric view the outcomes
// are idle, forward (toward the side whose orientation sequence is
// lexicographically smaller) and backward; for a symmetric view they are idle
// and move, where the adversary picks the edge.
//
// A table is refuted when either
//   * a terminal state whose visited set misses a node is reachable with
//     positive probability (BadTerminal), or
//   * from a reachable configuration the scheduler and adversary can force,
//     with probability one, an infinite fair computation that never reaches
//     a terminal configuration (ForcingNonTermination). Forcing activates one
//     robot until it moves (or, in distributed mode, a group of robots none
//     of which can stay idle); robots whose support is {idle} may be
//     activated for free. Fairness is a generalized Buchi condition, solved
//     as a Buchi game with a round-robin counter over robots.

namespace ringexp::impossibility {

enum SupportBit : std::uint8_t { kIdle = 1, kForward = 2, kBackward = 4 };
// Symmetric classes use kIdle and kMove only.
inline constexpr std::uint8_t kMove = kForward;

inline constexpr int kRingNodes = 4;
inline constexpr int kRingRobots = 3;

struct ViewClass {
  std::vector<int> smaller;  // lexicographically smaller orientation sequence
  std::vector<int> larger;
  bool symmetric = false;

  auto key() const { return std::make_pair(smaller, larger); }
};

// All multiplicity vectors of k robots on n nodes, lexicographic order.
inline std::vector<Configuration> all_configurations(int n, int k) {
  std::vector<Configuration> out;
  std::vector<int> d(static_cast<std::size_t>(n), 0);
  auto fill = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      d[static_cast<std::size_t>(i)] = left;
      out.emplace_back(d);
      return;
    }
    for (int m = left; m >= 0; --m) {
      d[static_cast<std::size_t>(i)] = m;
      self(self, i + 1, left - m);
    }
  };
  fill(fill, 0, k);
  std::sort(out.begin(), out.end());
  return out;
}

// View classes of every occupied node of every configuration, deduplicated
// as unordered pairs and sorted by key.
inline std::vector<ViewClass> enumerate_view_classes(int n = kRingNodes, int k = kRingRobots) {
  std::map<std::pair<std::vector<int>, std::vector<int>>, bool> seen;
  for (const auto& c : all_configurations(n, k)) {
    for (int i : c.occupied_nodes()) {
      const View v = view_of(c, i);
      seen.emplace(v.key(), v.symmetric());
    }
  }
  std::vector<ViewClass> out;
  for (const auto& [key, sym] : seen) out.push_back({key.first, key.second, sym});
  return out;
}

struct ProtocolTable {
  std::vector<std::uint8_t> supports;  // per view class
  bool operator==(const ProtocolTable&) const = default;
};

inline std::string support_name(std::uint8_t s, bool symmetric) {
  std::string out = "{";
  auto add = [&](const char* w) {
    if (out.size() > 1) out += ",";
    out += w;
  };
  if (s & kIdle) add("idle");
  if (symmetric) {
    if (s & kMove) add("move");
  } else {
    if (s & kForward) add("forward");
    if (s & kBackward) add("backward");
  }
  return out + "}";
}

// Mixed-radix enumeration of all tables: 7 nonempty supports per asymmetric
// class, 3 per symmetric class. Index 0 is the all-idle table.
class ProtocolSpace {
 public:
  explicit ProtocolSpace(std::vector<ViewClass> classes) : classes_(std::move(classes)) {
    for (const auto& c : classes_) {
      (c.symmetric ? symmetric_ : asymmetric_) += 1;
      size_ *= radix(c);
    }
  }

  const std::vector<ViewClass>& classes() const { return classes_; }
  std::uint64_t size() const { return size_; }
  int asymmetric_count() const { return asymmetric_; }
  int symmetric_count() const { return symmetric_; }

  ProtocolTable table(std::uint64_t index) const {
    ProtocolTable t;
    for (const auto& c : classes_) {
      t.supports.push_back(static_cast<std::uint8_t>(index % radix(c) + 1));
      index /= radix(c);
    }
    return t;
  }

  std::uint64_t index_of(const ProtocolTable& t) const {
    std::uint64_t index = 0;
    for (std::size_t i = classes_.size(); i-- > 0;) index = index * radix(classes_[i]) + (t.supports[i] - 1u);
    return index;
  }

 private:
  static std::uint64_t radix(const ViewClass& c) { return c.symmetric ? 3 : 7; }

  std::vector<ViewClass> classes_;
  int asymmetric_ = 0;
  int symmetric_ = 0;
  std::uint64_t size_ = 1;
};

enum class Mode { Distributed, Sequential };
enum class CertificateKind { BadTerminal, ForcingNonTermination, Unrefuted };

inline std::string to_string(Mode m) { return m == Mode::Distributed ? "distributed" : "sequential"; }
inline std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::BadTerminal:
      return "bad-terminal";
    case CertificateKind::ForcingNonTermination:
      return "forcing-non-termination";
    case CertificateKind::Unrefuted:
      return "unrefuted";
  }
  return "?";
}

// One positive-probability step between (configuration, visited) states.
struct Transition {
  Configuration before;
  std::uint32_t visited_before = 0;
  std::vector<std::pair<int, int>> moves;  // (from, to) per moving robot
  Configuration after;
  std::uint32_t visited_after = 0;
};

// One forced step on labelled robots. `outcomes` lists every position vector
// the step can end in; `taken` is the one this witness follows.
struct ForcingStep {
  std::vector<int> positions;
  std::vector<int> activated;
  std::vector<std::vector<int>> outcomes;
  std::vector<int> taken;
};

struct Certificate {
  CertificateKind kind = CertificateKind::Unrefuted;
  std::vector<Transition> path;       // from an initial state
  std::vector<ForcingStep> forcing;   // lasso; repeats from cycle_start
  std::size_t cycle_start = 0;
};

class Refuter {
 public:
  explicit Refuter(int n = kRingNodes, int k = kRingRobots)
      : n_(n), k_(k), classes_(enumerate_view_classes(n, k)), configs_(all_configurations(n, k)) {
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> class_index;
    for (std::size_t i = 0; i < classes_.size(); ++i) class_index[classes_[i].key()] = static_cast<int>(i);
    std::size_t codes = 1;
    for (int i = 0; i < n_; ++i) codes *= static_cast<std::size_t>(k_ + 1);
    index_of_code_.assign(codes, -1);
    for (std::size_t c = 0; c < configs_.size(); ++c) {
      index_of_code_[code(configs_[c])] = static_cast<int>(c);
      std::vector<int> cls(static_cast<std::size_t>(n_), -1);
      std::vector<int> side(static_cast<std::size_t>(n_), 0);
      for (int i : configs_[c].occupied_nodes()) {
        const View v = view_of(configs_[c], i);
        cls[static_cast<std::size_t>(i)] = class_index.at(v.key());
        side[static_cast<std::size_t>(i)] = v.smaller_side();
      }
      class_of_.push_back(std::move(cls));
      side_of_.push_back(std::move(side));
    }
    full_mask_ = (1u << n_) - 1;
  }

  int nodes() const { return n_; }
  int robots() const { return k_; }
  const std::vector<ViewClass>& classes() const { return classes_; }
  const std::vector<Configuration>& configurations() const { return configs_; }

  int index_of(const Configuration& c) const { return index_of_code_[code(c)]; }
  int class_of(const Configuration& c, int node) const {
    return class_of_[static_cast<std::size_t>(index_of(c))][static_cast<std::size_t>(wrap(node, n_))];
  }

  std::uint8_t support(const ProtocolTable& t, const Configuration& c, int node) const {
    return t.supports[static_cast<std::size_t>(class_of(c, node))];
  }

  bool idle_allowed(const ProtocolTable& t, const Configuration& c, int node) const {
    return support(t, c, node) & kIdle;
  }

  // Neighbors a robot on `node` can move to with positive probability.
  std::vector<int> moves(const ProtocolTable& t, const Configuration& c, int node) const {
    const int cls = class_of(c, node);
    const std::uint8_t s = t.supports[static_cast<std::size_t>(cls)];
    std::vector<int> out;
    if (classes_[static_cast<std::size_t>(cls)].symmetric) {
      if (s & kMove) out = {wrap(node - 1, n_), wrap(node + 1, n_)};
      return out;
    }
    const int side = side_of_[static_cast<std::size_t>(index_of(c))][static_cast<std::size_t>(wrap(node, n_))];
    if (s & kForward) out.push_back(wrap(node + side, n_));
    if (s & kBackward) out.push_back(wrap(node - side, n_));
    return out;
  }

  bool terminal(const ProtocolTable& t, const Configuration& c) const {
    for (int i : c.occupied_nodes()) {
      if (!moves(t, c, i).empty()) return false;
    }
    return true;
  }

  std::uint32_t occupied_mask(const Configuration& c) const {
    std::uint32_t m = 0;
    for (int i : c.occupied_nodes()) m |= 1u << i;
    return m;
  }

  std::uint32_t full_mask() const { return full_mask_; }

  // Positive-probability successors of a configuration: any nonempty set of
  // robots (one robot in sequential mode) realizes any outcome of its
  // support; at least one robot moves.
  std::vector<std::pair<Configuration, std::vector<std::pair<int, int>>>> successors(const ProtocolTable& t,
                                                                                     const Configuration& c,
                                                                                     Mode mode) const {
    std::vector<std::pair<Configuration, std::vector<std::pair<int, int>>>> out;
    const auto occ = c.occupied_nodes();
    if (mode == Mode::Sequential) {
      for (int u : occ) {
        for (int d : moves(t, c, u)) {
          Configuration next = c;
          --next.at(u);
          ++next.at(d);
          out.push_back({next, {{u, d}}});
        }
      }
      return out;
    }
    // Per node, every split of its robots among staying and each move.
    std::vector<std::vector<std::vector<std::pair<int, int>>>> per_node;
    for (int u : occ) {
      const auto dests = moves(t, c, u);
      std::vector<std::vector<std::pair<int, int>>> splits;
      const int m = c[u];
      if (dests.empty()) {
        splits.push_back({});
      } else if (dests.size() == 1) {
        for (int a = 0; a <= m; ++a) splits.push_back(std::vector<std::pair<int, int>>(static_cast<std::size_t>(a), {u, dests[0]}));
      } else {
        for (int a = 0; a <= m; ++a) {
          for (int b = 0; a + b <= m; ++b) {
            std::vector<std::pair<int, int>> mv(static_cast<std::size_t>(a), {u, dests[0]});
            mv.insert(mv.end(), static_cast<std::size_t>(b), {u, dests[1]});
            splits.push_back(std::move(mv));
          }
        }
      }
      per_node.push_back(std::move(splits));
    }
    std::vector<std::size_t> pick(per_node.size(), 0);
    while (true) {
      std::vector<std::pair<int, int>> mv;
      for (std::size_t j = 0; j < per_node.size(); ++j) {
        const auto& s = per_node[j][pick[j]];
        mv.insert(mv.end(), s.begin(), s.end());
      }
      if (!mv.empty()) {
        Configuration next = c;
        for (auto [from, to] : mv) {
          --next.at(from);
          ++next.at(to);
        }
        out.push_back({next, std::move(mv)});
      }
      std::size_t j = 0;
      while (j < pick.size() && ++pick[j] == per_node[j].size()) pick[j++] = 0;
      if (j == pick.size()) break;
    }
    return out;
  }

  struct Reachability {
    std::vector<bool> reached;          // per state id cfg * 2^n + visited
    std::vector<int> parent;            // state id, -1 for initial states
    std::vector<Transition> via;        // transition into each reached state
    std::optional<int> bad_terminal;    // first bad terminal state found
  };

  int state_id(const Configuration& c, std::uint32_t visited) const {
    return (index_of(c) << n_) | static_cast<int>(visited);
  }
  Configuration state_config(int id) const { return configs_[static_cast<std::size_t>(id >> n_)]; }
  std::uint32_t state_visited(int id) const { return static_cast<std::uint32_t>(id) & full_mask_; }

  // Breadth-first search over (configuration, visited) from every towerless
  // configuration with its occupied nodes visited.
  Reachability reachability(const ProtocolTable& t, Mode mode) const {
    Reachability r;
    const std::size_t states = configs_.size() << n_;
    r.reached.assign(states, false);
    r.parent.assign(states, -1);
    r.via.resize(states);
    std::vector<std::vector<std::pair<Configuration, std::vector<std::pair<int, int>>>>> succ(configs_.size());
    std::vector<bool> succ_done(configs_.size(), false);
    std::deque<int> queue;
    for (const auto& c : configs_) {
      if (!c.towerless()) continue;
      const int id = state_id(c, occupied_mask(c));
      r.reached[static_cast<std::size_t>(id)] = true;
      queue.push_back(id);
    }
    while (!queue.empty()) {
      const int id = queue.front();
      queue.pop_front();
      const Configuration c = state_config(id);
      const std::uint32_t visited = state_visited(id);
      if (terminal(t, c)) {
        if (visited != full_mask_ && !r.bad_terminal) r.bad_terminal = id;
        continue;
      }
      const auto ci = static_cast<std::size_t>(index_of(c));
      if (!succ_done[ci]) {
        succ[ci] = successors(t, c, mode);
        succ_done[ci] = true;
      }
      for (const auto& [next, mv] : succ[ci]) {
        const std::uint32_t nv = visited | occupied_mask(next);
        const int nid = state_id(next, nv);
        if (r.reached[static_cast<std::size_t>(nid)]) continue;
        r.reached[static_cast<std::size_t>(nid)] = true;
        r.parent[static_cast<std::size_t>(nid)] = id;
        r.via[static_cast<std::size_t>(nid)] = {c, visited, mv, next, nv};
        queue.push_back(nid);
      }
    }
    return r;
  }

  // True when every ring symmetry, applied to configuration and visited set
  // together, maps reached states to reached states.
  bool symmetry_closed(const Reachability& r) const {
    for (std::size_t id = 0; id < r.reached.size(); ++id) {
      if (!r.reached[id]) continue;
      const Configuration c = state_config(static_cast<int>(id));
      const std::uint32_t visited = state_visited(static_cast<int>(id));
      for (int reflect = 0; reflect < 2; ++reflect) {
        for (int shift = 0; shift < n_; ++shift) {
          auto image = [&](int x) { return wrap(reflect ? -x - shift : x - shift, n_); };
          std::vector<int> d(static_cast<std::size_t>(n_), 0);
          std::uint32_t v = 0;
          for (int x = 0; x < n_; ++x) {
            d[static_cast<std::size_t>(image(x))] = c[x];
            if (visited >> x & 1) v |= 1u << image(x);
          }
          if (!r.reached[static_cast<std::size_t>(state_id(Configuration(std::move(d)), v))]) return false;
        }
      }
    }
    return true;
  }

  std::vector<Transition> path_to(const Reachability& r, int id) const {
    std::vector<Transition> path;
    while (r.parent[static_cast<std::size_t>(id)] >= 0) {
      path.push_back(r.via[static_cast<std::size_t>(id)]);
      id = r.parent[static_cast<std::size_t>(id)];
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  // Labelled robot positions, encoded base n.
  int position_code(const std::vector<int>& pos) const {
    int code = 0;
    for (std::size_t r = pos.size(); r-- > 0;) code = code * n_ + pos[r];
    return code;
  }
  std::vector<int> positions_of(int code) const {
    std::vector<int> pos(static_cast<std::size_t>(k_));
    for (int r = 0; r < k_; ++r) {
      pos[static_cast<std::size_t>(r)] = code % n_;
      code /= n_;
    }
    return pos;
  }
  Configuration configuration_of(const std::vector<int>& pos) const {
    std::vector<int> d(static_cast<std::size_t>(n_), 0);
    for (int p : pos) ++d[static_cast<std::size_t>(p)];
    return Configuration(std::move(d));
  }

  // A forceable step on labelled robots: the activated set and the outcomes
  // the opponent (coin flips of asymmetric two-way supports) may choose from.
  struct ForcedAction {
    std::uint32_t activated = 0;
    std::vector<int> outcomes;  // position codes
  };

  std::vector<ForcedAction> forced_actions(const ProtocolTable& t, int code, Mode mode) const {
    std::vector<ForcedAction> out;
    const auto pos = positions_of(code);
    const Configuration c = configuration_of(pos);
    if (terminal(t, c)) return out;
    std::vector<std::vector<int>> mv(static_cast<std::size_t>(k_));
    std::vector<bool> sym(static_cast<std::size_t>(k_));
    for (int r = 0; r < k_; ++r) {
      const int node = pos[static_cast<std::size_t>(r)];
      mv[static_cast<std::size_t>(r)] = moves(t, c, node);
      sym[static_cast<std::size_t>(r)] = classes_[static_cast<std::size_t>(class_of(c, node))].symmetric;
    }
    // Groups: singletons always; larger groups only in distributed mode and
    // only of robots that cannot stay idle.
    for (std::uint32_t group = 1; group < (1u << k_); ++group) {
      const int size = std::popcount(group);
      if (size > 1 && mode == Mode::Sequential) continue;
      bool ok = true;
      for (int r = 0; r < k_ && ok; ++r) {
        if (!(group >> r & 1)) continue;
        if (size == 1 && mv[static_cast<std::size_t>(r)].empty()) {
          out.push_back({group, {code}});  // idle-only robot, activated for free
          ok = false;
        } else if (size > 1 && (mv[static_cast<std::size_t>(r)].empty() || idle_allowed(t, c, pos[static_cast<std::size_t>(r)]))) {
          ok = false;
        }
      }
      if (!ok) continue;
      // Adversary picks for symmetric robots are the controller's choice;
      // asymmetric robots with two directions branch for the opponent.
      std::vector<int> members;
      for (int r = 0; r < k_; ++r) {
        if (group >> r & 1) members.push_back(r);
      }
      std::vector<std::size_t> sym_pick(members.size(), 0);
      while (true) {
        std::vector<std::vector<int>> branch_pos{pos};
        for (std::size_t m = 0; m < members.size(); ++m) {
          const auto r = static_cast<std::size_t>(members[m]);
          std::vector<int> dests = sym[r] ? std::vector<int>{mv[r][sym_pick[m]]} : mv[r];
          std::vector<std::vector<int>> next;
          for (const auto& b : branch_pos) {
            for (int d : dests) {
              auto nb = b;
              nb[r] = d;
              next.push_back(std::move(nb));
            }
          }
          branch_pos = std::move(next);
        }
        ForcedAction a{group, {}};
        for (const auto& b : branch_pos) a.outcomes.push_back(position_code(b));
        out.push_back(std::move(a));
        std::size_t m = 0;
        while (m < members.size() && (!sym[static_cast<std::size_t>(members[m])] || ++sym_pick[m] == 2)) {
          if (sym[static_cast<std::size_t>(members[m])]) sym_pick[m] = 0;
          ++m;
        }
        if (m == members.size()) break;
      }
    }
    return out;
  }

  // Fair forcing game. State id = ((code * k) + counter) * 2 + wrapped.
  struct ForcingGame {
    BuchiGame game;
    std::vector<std::pair<int, ForcedAction>> action_info;  // per game action: (position code, action)
    BuchiGame::Solution solution;
  };

  int game_state(int code, int counter, int wrapped) const { return ((code * k_) + counter) * 2 + wrapped; }

  ForcingGame forcing_game(const ProtocolTable& t, Mode mode) const {
    ForcingGame fg;
    int codes = 1;
    for (int r = 0; r < k_; ++r) codes *= n_;
    for (int code = 0; code < codes; ++code) {
      for (int ctr = 0; ctr < k_; ++ctr) {
        for (int w = 0; w < 2; ++w) fg.game.add_state(w == 1);
      }
    }
    for (int code = 0; code < codes; ++code) {
      const auto actions = forced_actions(t, code, mode);
      for (int ctr = 0; ctr < k_; ++ctr) {
        int next_ctr = ctr;
        for (const auto& a : actions) {
          next_ctr = ctr;
          int wrapped = 0;
          while (a.activated >> next_ctr & 1) {
            if (++next_ctr == k_) {
              next_ctr = 0;
              wrapped = 1;
              break;
            }
          }
          std::vector<int> succ;
          for (int o : a.outcomes) succ.push_back(game_state(o, next_ctr, wrapped));
          for (int w = 0; w < 2; ++w) {
            fg.game.add_action(game_state(code, ctr, w), succ);
            fg.action_info.push_back({code, a});
          }
        }
      }
    }
    fg.solution = fg.game.solve();
    return fg;
  }

  Certificate refute(const ProtocolTable& t, Mode mode) const {
    Certificate cert;
    const Reachability r = reachability(t, mode);
    if (r.bad_terminal) {
      cert.kind = CertificateKind::BadTerminal;
      cert.path = path_to(r, *r.bad_terminal);
      return cert;
    }
    const ForcingGame fg = forcing_game(t, mode);
    for (std::size_t id = 0; id < r.reached.size(); ++id) {
      if (!r.reached[id]) continue;
      const Configuration c = state_config(static_cast<int>(id));
      std::vector<int> pos;
      for (int i = 0; i < n_; ++i) pos.insert(pos.end(), static_cast<std::size_t>(c[i]), i);
      const int start = game_state(position_code(pos), 0, 0);
      if (!fg.solution.winning[static_cast<std::size_t>(start)]) continue;
      cert.kind = CertificateKind::ForcingNonTermination;
      cert.path = path_to(r, static_cast<int>(id));
      // Follow the strategy, opponent taking the first outcome, until a game
      // state repeats.
      std::map<int, std::size_t> seen;
      int s = start;
      while (!seen.count(s)) {
        seen[s] = cert.forcing.size();
        const int action = fg.solution.strategy[static_cast<std::size_t>(s)];
        const auto& [code, fa] = fg.action_info[static_cast<std::size_t>(action)];
        ForcingStep step;
        step.positions = positions_of(code);
        for (int rb = 0; rb < k_; ++rb) {
          if (fa.activated >> rb & 1) step.activated.push_back(rb);
        }
        for (int o : fa.outcomes) step.outcomes.push_back(positions_of(o));
        const int next = fg.game.successors(action).front();
        step.taken = positions_of(next / 2 / k_);
        cert.forcing.push_back(std::move(step));
        s = next;
      }
      cert.cycle_start = seen[s];
      return cert;
    }
    return cert;
  }

 private:
  std::size_t code(const Configuration& c) const {
    std::size_t v = 0;
    for (int i = n_ - 1; i >= 0; --i) v = v * static_cast<std::size_t>(k_ + 1) + static_cast<std::size_t>(c[i]);
    return v;
  }

  int n_;
  int k_;
  std::vector<ViewClass> classes_;
  std::vector<Configuration> configs_;
  std::vector<int> index_of_code_;
  std::vector<std::vector<int>> class_of_;
  std::vector<std::vector<int>> side_of_;
  std::uint32_t full_mask_ = 0;
};

// Engine decision realizing a support with uniform probabilities, for the
// supports a single Decision can express. Asymmetric supports holding both
// directions have no such form.
inline std::optional<Decision> as_decision(const Refuter& refuter, const ProtocolTable& t, const Configuration& c,
                                           int node) {
  const std::uint8_t s = refuter.support(t, c, node);
  const bool idle = s & kIdle;
  if (refuter.classes()[static_cast<std::size_t>(refuter.class_of(c, node))].symmetric) {
    if (!(s & kMove)) return Decision::idle();
    return idle ? Decision::try_move_either() : Decision::move_either();
  }
  const auto dests = refuter.moves(t, c, node);
  if (dests.empty()) return Decision::idle();
  if (dests.size() == 2) return std::nullopt;
  return idle ? Decision::try_move(dests[0]) : Decision::move(dests[0]);
}

struct ModeSummary {
  Mode mode = Mode::Distributed;
  std::uint64_t total = 0;
  std::uint64_t bad_terminal = 0;
  std::uint64_t forcing = 0;
  std::uint64_t unrefuted = 0;
  // First table index of each kind, when present.
  std::map<CertificateKind, std::uint64_t> first_index;
};

inline ModeSummary refute_all(const Refuter& refuter, Mode mode, int threads = 1) {
  const ProtocolSpace space(refuter.classes());
  constexpr std::uint64_t kChunk = 1024;
  const std::uint64_t chunks = (space.size() + kChunk - 1) / kChunk;
  auto parts = parallel_map<std::vector<CertificateKind>>(static_cast<std::size_t>(chunks), threads, [&](std::size_t ch) {
    std::vector<CertificateKind> kinds;
    const std::uint64_t lo = ch * kChunk;
    const std::uint64_t hi = std::min(space.size(), lo + kChunk);
    for (std::uint64_t i = lo; i < hi; ++i) kinds.push_back(refuter.refute(space.table(i), mode).kind);
    return kinds;
  });
  ModeSummary s;
  s.mode = mode;
  std::uint64_t index = 0;
  for (const auto& part : parts) {
    for (CertificateKind k : part) {
      ++s.total;
      if (k == CertificateKind::BadTerminal) ++s.bad_terminal;
      if (k == CertificateKind::ForcingNonTermination) ++s.forcing;
      if (k == CertificateKind::Unrefuted) ++s.unrefuted;
      s.first_index.emplace(k, index);
      ++index;
    }
  }
  return s;
}

using nlohmann::ordered_json;

inline ordered_json to_json(const Refuter& refuter, const ProtocolTable& t) {
  ordered_json j = ordered_json::array();
  for (std::size_t i = 0; i < refuter.classes().size(); ++i) {
    const auto& c = refuter.classes()[i];
    ordered_json e;
    e["view"] = {c.smaller, c.larger};
    e["symmetric"] = c.symmetric;
    e["support"] = support_name(t.supports[i], c.symmetric);
    j.push_back(e);
  }
  return j;
}

inline ordered_json to_json(const Certificate& cert) {
  ordered_json j;
  j["kind"] = to_string(cert.kind);
  ordered_json path = ordered_json::array();
  for (const auto& tr : cert.path) {
    path.push_back({{"before", tr.before.to_string()},
                    {"visited_before", tr.visited_before},
                    {"moves", tr.moves},
                    {"after", tr.after.to_string()},
                    {"visited_after", tr.visited_after}});
  }
  j["path"] = path;
  if (cert.kind == CertificateKind::ForcingNonTermination) {
    ordered_json f = ordered_json::array();
    for (const auto& s : cert.forcing) {
      f.push_back({{"positions", s.positions}, {"activated", s.activated}, {"outcomes", s.outcomes}, {"taken", s.taken}});
    }
    j["forcing"] = f;
    j["cycle_start"] = cert.cycle_start;
  }
  return j;
}

inline ordered_json to_json(const Refuter& refuter, const ModeSummary& s) {
  ordered_json j;
  j["mode"] = to_string(s.mode);
  j["total"] = s.total;
  j["bad_terminal"] = s.bad_terminal;
  j["forcing"] = s.forcing;
  j["unrefuted"] = s.unrefuted;
  const ProtocolSpace space(refuter.classes());
  ordered_json examples = ordered_json::array();
  for (const auto& [kind, index] : s.first_index) {
    const ProtocolTable t = space.table(index);
    ordered_json e;
    e["table_index"] = index;
    e["table"] = to_json(refuter, t);
    e["certificate"] = to_json(refuter.refute(t, s.mode));
    examples.push_back(e);
  }
  j["example_certificates"] = examples;
  return j;
}

}  // namespace ringexp::impossibility
