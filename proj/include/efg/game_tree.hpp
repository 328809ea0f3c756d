#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace efg {

using NodeId = std::int32_t;

inline constexpr double kStructuralTol = 1e-12;

// A decision point owned by `player` (1 or 2). Actions keep declaration
// order; all derived vectors are deterministic functions of that order.
struct DecisionNode {
  int player = 0;
  int infoset = -1;  // index into GameTree::infosets
  std::vector<std::string> actions;
  std::vector<NodeId> children;
};

struct ChanceNode {
  std::vector<double> probs;
  std::vector<NodeId> children;
};

struct TerminalNode {
  double payoff = 0.0;  // utility of player 1, in [-1, 1]
};

using Node = std::variant<DecisionNode, ChanceNode, TerminalNode>;

struct InfosetInfo {
  int player = 0;
  std::string label;
};

// Explicit extensive-form game tree. Node ids are indices into `nodes`.
// Immutable after construction; safe to share across threads read-only.
struct GameTree {
  std::string name;
  std::vector<Node> nodes;
  std::vector<InfosetInfo> infosets;
  NodeId root = 0;

  // Registers (player, label) and returns its infoset index; reuses an
  // existing entry when the pair was seen before.
  int infoset_id(int player, const std::string& label);

  const DecisionNode* decision(NodeId id) const {
    return std::get_if<DecisionNode>(&nodes[id]);
  }
  const ChanceNode* chance(NodeId id) const {
    return std::get_if<ChanceNode>(&nodes[id]);
  }
  const TerminalNode* terminal(NodeId id) const {
    return std::get_if<TerminalNode>(&nodes[id]);
  }
};

struct Violation {
  enum class Kind { structural, perfect_recall, chance_probability, payoff_range };
  Kind kind;
  NodeId node = -1;
  std::string message;
};

// Returns every invariant violation found; an empty list means the tree is a
// valid perfect-recall game. Structural problems (bad references, repeated
// parents, cycles) are reported with Kind::structural and suppress the
// dependent checks they would corrupt.
std::vector<Violation> validate_game(const GameTree& tree);

const char* violation_kind_name(Violation::Kind kind);

}  // namespace efg
