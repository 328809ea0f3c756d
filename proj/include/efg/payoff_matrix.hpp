#pragma once

#include <span>
#include <vector>

#include "efg/treeplex.hpp"

namespace efg {

// Sparse bilinear payoff operator: entry (s1, s2) aggregates the
// chance-weighted terminal payoffs whose sequence pair is (s1, s2), so
// x' U y is player 1's expected utility.
struct PayoffMatrix {
  struct Entry {
    int row = 0;  // player 1 sequence
    int col = 0;  // player 2 sequence
    double value = 0.0;
  };
  int rows = 0;
  int cols = 0;
  std::vector<Entry> entries;

  std::vector<double> multiply(std::span<const double> y) const;             // U y
  std::vector<double> multiply_transposed(std::span<const double> x) const;  // U' x
  double bilinear(std::span<const double> x, std::span<const double> y) const;
};

PayoffMatrix build_payoff_matrix(const GameTree& tree, const Treeplex& tp1,
                                 const Treeplex& tp2);

struct OperatorNormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Spectral norm estimate by power iteration on U'U, to relative tolerance
// `tol`. Non-convergence within max_iterations is reported with the best
// estimate so far.
OperatorNormResult operator_norm(const PayoffMatrix& op, double tol,
                                 int max_iterations = 20000);

}  // namespace efg
