#pragma once

#include <string>
#include <vector>

#include "efg/game_tree.hpp"

namespace efg {

// Line-oriented text format, one node per line:
//   # comment
//   game <name>
//   root <id>
//   node <id> decision <player> <infoset-label> <action>:<child> ...
//   node <id> chance <prob>:<child> ...
//   node <id> terminal <payoff>
// Labels and action names must contain no whitespace or ':'. Probabilities
// and payoffs are printed with 17 significant digits so a round trip is
// bit-exact.
std::string serialize(const GameTree& tree);

struct ParseIssue {
  int line = 0;
  std::string message;
};

struct ParseResult {
  bool ok = false;
  GameTree tree;
  std::vector<ParseIssue> issues;
};

ParseResult parse_game(const std::string& text);

// Structural equality: same node kinds, payoffs, probabilities, players,
// action labels, children and infoset labels in identical order.
bool trees_equal(const GameTree& a, const GameTree& b);

}  // namespace efg
