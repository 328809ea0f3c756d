#pragma once

#include <span>
#include <vector>

#include "efg/game_tree.hpp"

namespace efg {

inline constexpr double kStrategyTol = 1e-9;

// Sequence-form topology for one player. Sequence 0 is the empty sequence;
// every other sequence is an (infoset, action) pair. Infosets are listed in
// a topological order (ancestors first) and each infoset's action sequences
// occupy a contiguous index range.
struct Treeplex {
  int player = 0;
  int num_sequences = 1;

  std::vector<int> infoset_ids;    // local index -> GameTree infoset index
  std::vector<int> num_actions;    // per local infoset
  std::vector<int> first_sequence; // per local infoset: index of (I, action 0)
  std::vector<int> parent_seq;     // per local infoset: sequence of sigma(I)
  std::vector<int> infoset_of_seq; // per sequence: local infoset, -1 for empty
  std::vector<int> local_of_infoset;             // GameTree infoset -> local, -1
  std::vector<std::vector<int>> children_of_seq; // per sequence: local infosets
                                                 // immediately following it

  int num_infosets() const { return static_cast<int>(infoset_ids.size()); }
  int sequence(int local_infoset, int action) const {
    return first_sequence[local_infoset] + action;
  }
};

// Realization-probability vector over one player's sequences.
struct SequenceStrategy {
  int player = 0;
  std::vector<double> values;
};

// Requires validate_game(tree) to have passed.
Treeplex build_treeplex(const GameTree& tree, int player);

// Largest deviation from the flow-conservation constraints (including
// values[0] = 1 and entries inside [0,1]); valid strategies stay <= 1e-9.
double flow_violation(const Treeplex& tp, std::span<const double> x);

bool is_valid_strategy(const Treeplex& tp, std::span<const double> x,
                       double tol = kStrategyTol);

// True iff x[sigma(I)a] >= eps * x[sigma(I)] - 1e-12 at every infoset-action.
bool validate_perturbed(const Treeplex& tp, std::span<const double> x, double eps);

SequenceStrategy uniform_strategy(const Treeplex& tp);

// Per-infoset simplex points, indexed like Treeplex infosets.
struct BehavioralStrategy {
  int player = 0;
  std::vector<std::vector<double>> probs;
  std::vector<int> uniform_filled;  // local infosets where zero realization
                                    // mass forced the uniform fallback
};

SequenceStrategy behavioral_to_sequence(const Treeplex& tp,
                                        const std::vector<std::vector<double>>& probs);

BehavioralStrategy sequence_to_behavioral(const Treeplex& tp,
                                          std::span<const double> x);

}  // namespace efg
