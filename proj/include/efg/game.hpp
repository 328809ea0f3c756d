#pragma once

#include <string>

#include "efg/game_tree.hpp"
#include "efg/payoff_matrix.hpp"
#include "efg/treeplex.hpp"

namespace efg {

// Everything derived from a validated tree, bundled for the solvers and
// metrics. Immutable after construction; safe for concurrent reads.
struct Game {
  GameTree tree;
  Treeplex tp1, tp2;
  PayoffMatrix payoff;

  // Per-node path data (filled alongside the treeplexes).
  std::vector<double> chance_reach;  // product of chance probabilities to node
  std::vector<int> seq1, seq2;       // player sequence indices at each node

  double min_eps_bound = 0.5;  // min_I 1/(2 n_I) over both players

  const Treeplex& treeplex(int player) const { return player == 1 ? tp1 : tp2; }
};

// Validates and compiles; throws std::invalid_argument listing the
// violations when validation fails.
Game compile_game(GameTree tree);

// Per-player size line: infoset count and 1 + sum of action counts. Both
// players share these numbers in every zoo game.
struct GameSizes {
  int infosets1 = 0, infosets2 = 0;
  int sequences1 = 0, sequences2 = 0;
};

GameSizes game_sizes(const Game& game);

}  // namespace efg
