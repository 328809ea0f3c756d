#pragma once

#include <span>
#include <vector>

#include "efg/game.hpp"

namespace efg {

struct BestResponseResult {
  double value = 0.0;  // expected utility of the responding player
  SequenceStrategy strategy;
  std::vector<double> infoset_values;  // per local infoset of the responder,
                                       // opponent-and-chance weighted
};

// Exact best response of `responder` against the opponent's sequence-form
// strategy, by one bottom-up pass over the responder's treeplex.
BestResponseResult best_response(const Game& game, int responder,
                                 std::span<const double> opponent);

// max_x x'Uy - min_y x'Uy; zero exactly at a Nash equilibrium.
double nash_gap(const Game& game, std::span<const double> x,
                std::span<const double> y);

struct InfosetRegretReport {
  // Indexed by GameTree infoset id; regret of the acting player at that
  // infoset under the reach-with-probability-one Bayesian belief.
  std::vector<double> regret;
  std::vector<bool> zero_reach_fallback;  // belief normalizer was zero
  double average = 0.0;                   // mean over all infosets of both players
};

InfosetRegretReport avg_infoset_regret(const Game& game, std::span<const double> x,
                                       std::span<const double> y);

// Euclidean distance between concatenated sequence-form profiles.
double l2_distance(std::span<const double> x, std::span<const double> y,
                   std::span<const double> x_ref, std::span<const double> y_ref);

}  // namespace efg
