#pragma once

#include <concepts>
#include <optional>
#include <string>

#include "ringexp/configuration.hpp"

namespace ringexp {

enum class Action { Idle, Move, TryMove };

// Compute-phase output for one robot. A moving decision without a target
// means the robot sits on a symmetry axis and the adversary picks the edge.
struct Decision {
  Action action = Action::Idle;
  std::optional<int> target;

  static Decision idle() { return {}; }
  static Decision move(int node) { return {Action::Move, node}; }
  static Decision move_either() { return {Action::Move, std::nullopt}; }
  static Decision try_move(int node) { return {Action::TryMove, node}; }
  static Decision try_move_either() { return {Action::TryMove, std::nullopt}; }

  bool is_idle() const { return action == Action::Idle; }
  bool adversary_choice() const { return action != Action::Idle && !target; }

  std::string to_string() const {
    switch (action) {
      case Action::Idle:
        return "idle";
      case Action::Move:
        return target ? "move->" + std::to_string(*target) : "move->adversary";
      case Action::TryMove:
        return target ? "try->" + std::to_string(*target) : "try->adversary";
    }
    return "?";
  }

  bool operator==(const Decision&) const = default;
};

// Anything that maps a snapshot and an occupied node to a Decision.
template <typename P>
concept DecisionRule = requires(const P& p, const Configuration& c, int node) {
  { p(c, node) } -> std::convertible_to<Decision>;
};

}  // namespace ringexp
