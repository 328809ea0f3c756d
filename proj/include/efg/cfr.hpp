#pragma once

#include "efg/solver.hpp"

namespace efg {

struct CfrResult {
  Trace trace;
  SequenceStrategy avg_x, avg_y;
  std::int64_t iterations = 0;
};

// Vanilla counterfactual regret minimization: simultaneous updates,
// regret matching at every infoset, reach-weighted time-averaged strategy.
// Trace metrics are evaluated on the averages.
CfrResult cfr(const Game& game, std::int64_t iterations,
              const RecordOptions& rec = {});

}  // namespace efg
