#pragma once

#include <array>

#include "efg/game.hpp"
#include "efg/zoo.hpp"

namespace efg::oracle {

// Dense standard-form linear program: min c'z subject to A z = b, z >= 0.
struct LpProblem {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // row-major, rows x cols
  std::vector<double> b;
  std::vector<double> c;

  double& at(int r, int col) { return a[static_cast<std::size_t>(r) * cols + col]; }
};

struct LpSolution {
  bool optimal = false;
  bool feasible = true;
  double objective = 0.0;
  std::vector<double> z;
};

// Two-phase primal simplex with a Bland fallback for degeneracy. Built for
// the desk-scale oracle problems in this project, not production LP work.
LpSolution solve_lp(const LpProblem& lp);

struct EquilibriumResult {
  double value = 0.0;  // to player 1
  SequenceStrategy x, y;
  double gap = 0.0;  // best-response certificate of the returned profile
};

// Sequence-form saddle point by one LP per player. Throws when
// |Sigma1| * |Sigma2| exceeds size_cap.
EquilibriumResult lp_equilibrium(const Game& game, long long size_cap = 100000);

struct MatrixPerfectResult {
  double value = 0.0;
  std::array<double, 3> x{}, y{};
  std::array<bool, 3> row_alive{}, col_alive{};
};

// Iterated pure weak-dominance elimination followed by an exact solve of the
// reduced zero-sum game; isolates the perfect equilibrium of the 3x3 games
// used here.
MatrixPerfectResult matrix_perfect_equilibrium(const zoo::Matrix3& m);

}  // namespace efg::oracle
