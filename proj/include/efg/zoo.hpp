#pragma once

#include <array>
#include <map>
#include <string>

#include "efg/game_tree.hpp"

namespace efg::zoo {

struct GameSpec {
  std::string name;  // kuhn | leduc | goofspiel3 | drps | matrix
  std::map<std::string, std::string> params;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

// 3x3 payoff grid studied throughout: rows are player 1's actions.
Matrix3 paper_matrix();

GameTree gen_kuhn();

// Two Kuhn-style betting rounds with a one-raise cap, deck of `ranks` ranks
// in two suits, community card revealed between rounds. Bet sizes are 2 and
// 4 blinds; payoffs are scaled into [-1,1] by the maximum pot swing.
GameTree gen_leduc(int ranks);

// 3-card Goofspiel, random prize order, simultaneous bids (bids disclosed
// after each turn), ties discard the prize, forced last turn auto-resolved.
GameTree gen_goofspiel3();

// Deep rock-paper-scissors: two alternating gate moves per player feeding a
// skewed simultaneous RPS round shifted so that entering is strictly worse
// than player 1's immediate exit.
GameTree gen_drps();

GameTree gen_matrix(const Matrix3& payoffs);

// Dispatch by spec; throws std::invalid_argument for unknown names or bad
// parameters.
GameTree make_game(const GameSpec& spec);

}  // namespace efg::zoo
