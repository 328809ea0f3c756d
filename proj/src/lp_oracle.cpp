#include "efg/lp_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "efg/metrics.hpp"

namespace efg::oracle {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kZeroTol = 1e-9;

// Tableau simplex on min c'z, Az = b (b >= 0 after sign normalization).
class Tableau {
 public:
  Tableau(const LpProblem& lp) : m_(lp.rows), n_(lp.cols) {
    width_ = n_ + m_ + 1;  // columns, artificials, rhs
    t_.assign(static_cast<std::size_t>(m_ + 1) * width_, 0.0);
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      double sign = lp.b[r] < 0.0 ? -1.0 : 1.0;
      for (int c = 0; c < n_; ++c)
        at(r, c) = sign * lp.a[static_cast<std::size_t>(r) * n_ + c];
      at(r, n_ + r) = 1.0;
      rhs(r) = sign * lp.b[r];
      basis_[r] = n_ + r;
    }
  }

  double& at(int r, int c) { return t_[static_cast<std::size_t>(r) * width_ + c]; }
  double& rhs(int r) { return at(r, width_ - 1); }

  bool phase1() {
    // Objective: minimize the sum of artificials.
    for (int c = 0; c < width_; ++c) at(m_, c) = 0.0;
    for (int r = 0; r < m_; ++r)
      for (int c = 0; c < width_; ++c) at(m_, c) -= at(r, c);
    for (int r = 0; r < m_; ++r) at(m_, n_ + r) = 0.0;
    run(n_ + m_);
    double infeasibility = -at(m_, width_ - 1);
    if (infeasibility > kZeroTol) return false;
    // Drive any artificial still in the basis out of it.
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      int enter = -1;
      for (int c = 0; c < n_; ++c)
        if (std::abs(at(r, c)) > kPivotTol) {
          enter = c;
          break;
        }
      if (enter >= 0) pivot(r, enter);
      // A row with no eligible pivot is redundant; its artificial stays at 0.
    }
    return true;
  }

  void phase2(const std::vector<double>& c) {
    for (int col = 0; col < width_; ++col) at(m_, col) = 0.0;
    for (int col = 0; col < n_; ++col) at(m_, col) = c[col];
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_ && std::abs(at(m_, basis_[r])) > 0.0) {
        double f = at(m_, basis_[r]);
        for (int col = 0; col < width_; ++col) at(m_, col) -= f * at(r, col);
      }
    }
    run(n_);
  }

  double objective() { return -at(m_, width_ - 1); }

  std::vector<double> solution() {
    std::vector<double> z(n_, 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) z[basis_[r]] = at(r, width_ - 1);
    return z;
  }

 private:
  void pivot(int row, int col) {
    double p = at(row, col);
    for (int c = 0; c < width_; ++c) at(row, c) /= p;
    for (int r = 0; r <= m_; ++r) {
      if (r == row) continue;
      double f = at(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < width_; ++c) at(r, c) -= f * at(row, c);
    }
    basis_[row] = col;
  }

  void run(int usable_cols) {
    long long stall = 0;
    double last_obj = objective();
    for (long long it = 0; it < 200000; ++it) {
      bool bland = stall > 200;
      int enter = -1;
      double best = -kPivotTol;
      for (int c = 0; c < usable_cols; ++c) {
        double rc = at(m_, c);
        if (rc < -kPivotTol) {
          if (bland) {
            enter = c;
            break;
          }
          if (rc < best) {
            best = rc;
            enter = c;
          }
        }
      }
      if (enter < 0) return;  // optimal
      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < m_; ++r) {
        double a = at(r, enter);
        if (a > kPivotTol) {
          double ratio = at(r, width_ - 1) / a;
          if (leave < 0 || ratio < best_ratio - 1e-15 ||
              (std::abs(ratio - best_ratio) <= 1e-15 && basis_[r] < basis_[leave])) {
            leave = r;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) throw std::runtime_error("simplex: unbounded oracle LP");
      pivot(leave, enter);
      double obj = objective();
      stall = obj < last_obj - 1e-13 ? 0 : stall + 1;
      last_obj = obj;
    }
    throw std::runtime_error("simplex: iteration limit reached");
  }

  int m_, n_, width_;
  std::vector<double> t_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LpProblem& lp) {
  Tableau tab(lp);
  LpSolution sol;
  if (!tab.phase1()) {
    sol.feasible = false;
    return sol;
  }
  tab.phase2(lp.c);
  sol.optimal = true;
  sol.objective = tab.objective();
  sol.z = tab.solution();
  return sol;
}

namespace {

// Flow constraint triplets (row, sequence, coefficient) for one treeplex:
// row 0 pins the empty sequence to 1, one row per infoset conserves flow.
std::vector<std::array<double, 3>> flow_triplets(const Treeplex& tp) {
  std::vector<std::array<double, 3>> f;
  f.push_back({0.0, 0.0, 1.0});
  for (int local = 0; local < tp.num_infosets(); ++local) {
    f.push_back({double(local + 1), double(tp.parent_seq[local]), 1.0});
    for (int a = 0; a < tp.num_actions[local]; ++a)
      f.push_back({double(local + 1), double(tp.sequence(local, a)), -1.0});
  }
  return f;
}

// Best response LP for `player`: maximize the realization value against the
// opponent's flow polytope, which also certifies the game value.
//   player 1: max f2'p  s.t.  F1 x = f1,  F2'p - U'x <= 0
//   player 2: min f1'q  s.t.  F2 y = f2,  F1'q - U y >= 0
LpSolution strategy_lp(const Game& game, int player) {
  const Treeplex& own = player == 1 ? game.tp1 : game.tp2;
  const Treeplex& opp = player == 1 ? game.tp2 : game.tp1;
  const int n_own = own.num_sequences;
  const int n_opp = opp.num_sequences;
  const int m_own = own.num_infosets() + 1;
  const int m_opp = opp.num_infosets() + 1;

  // Columns: own strategy, dual p+ / p-, slack for the opponent rows.
  LpProblem lp;
  lp.cols = n_own + 2 * m_opp + n_opp;
  lp.rows = m_own + n_opp;
  lp.a.assign(static_cast<std::size_t>(lp.rows) * lp.cols, 0.0);
  lp.b.assign(lp.rows, 0.0);
  lp.c.assign(lp.cols, 0.0);

  for (const auto& [r, c, v] : flow_triplets(own))
    lp.at(static_cast<int>(r), static_cast<int>(c)) = v;
  lp.b[0] = 1.0;

  const int dual_base = n_own;
  for (const auto& [r, c, v] : flow_triplets(opp)) {
    int row = m_own + static_cast<int>(c);  // F_opp' indexed by opponent sequence
    lp.at(row, dual_base + static_cast<int>(r)) = v;
    lp.at(row, dual_base + m_opp + static_cast<int>(r)) = -v;
  }
  for (const auto& e : game.payoff.entries) {
    int row = m_own + (player == 1 ? e.col : e.row);
    int col = player == 1 ? e.row : e.col;
    lp.at(row, col) += -e.value;
  }
  // Player 1: F2'p - U'x <= 0 takes a +slack; player 2: F1'q - Uy >= 0 a -slack.
  double slack_sign = player == 1 ? 1.0 : -1.0;
  for (int s = 0; s < n_opp; ++s)
    lp.at(m_own + s, n_own + 2 * m_opp + s) = slack_sign;

  // Objective: player 1 maximizes p0 (min -p0); player 2 minimizes q0.
  lp.c[dual_base] = player == 1 ? -1.0 : 1.0;
  lp.c[dual_base + m_opp] = player == 1 ? 1.0 : -1.0;
  return solve_lp(lp);
}

}  // namespace

EquilibriumResult lp_equilibrium(const Game& game, long long size_cap) {
  long long size = static_cast<long long>(game.tp1.num_sequences) *
                   static_cast<long long>(game.tp2.num_sequences);
  if (size > size_cap)
    throw std::invalid_argument("lp oracle: game exceeds the size cap");

  LpSolution s1 = strategy_lp(game, 1);
  LpSolution s2 = strategy_lp(game, 2);
  if (!s1.optimal || !s2.optimal)
    throw std::runtime_error("lp oracle: simplex failed on this game");

  EquilibriumResult res;
  res.x.player = 1;
  res.x.values.assign(s1.z.begin(), s1.z.begin() + game.tp1.num_sequences);
  res.y.player = 2;
  res.y.values.assign(s2.z.begin(), s2.z.begin() + game.tp2.num_sequences);
  double v1 = -s1.objective;  // maximized p0
  double v2 = s2.objective;   // minimized q0
  if (std::abs(v1 - v2) > 1e-7)
    throw std::runtime_error("lp oracle: player values disagree");
  res.value = v1;
  res.gap = nash_gap(game, res.x.values, res.y.values);
  return res;
}

MatrixPerfectResult matrix_perfect_equilibrium(const zoo::Matrix3& m) {
  MatrixPerfectResult res;
  std::array<bool, 3> row{true, true, true}, col{true, true, true};

  // Simultaneous marking per round keeps the refinement meaning: everything
  // dominated with respect to the current game goes in one sweep, so an
  // elimination cannot erase the strict part that justified another.
  bool changed = true;
  while (changed) {
    changed = false;
    std::array<bool, 3> drop_row{}, drop_col{};
    for (int i = 0; i < 3; ++i) {
      if (!row[i]) continue;
      for (int k = 0; k < 3 && !drop_row[i]; ++k) {
        if (k == i || !row[k]) continue;
        bool ge = true, gt = false;
        for (int j = 0; j < 3; ++j) {
          if (!col[j]) continue;
          if (m[k][j] < m[i][j] - 1e-12) ge = false;
          if (m[k][j] > m[i][j] + 1e-12) gt = true;
        }
        drop_row[i] = ge && gt;
      }
    }
    for (int j = 0; j < 3; ++j) {
      if (!col[j]) continue;
      for (int k = 0; k < 3 && !drop_col[j]; ++k) {
        if (k == j || !col[k]) continue;
        bool le = true, lt = false;
        for (int i = 0; i < 3; ++i) {
          if (!row[i]) continue;
          if (m[i][k] > m[i][j] + 1e-12) le = false;
          if (m[i][k] < m[i][j] - 1e-12) lt = true;
        }
        drop_col[j] = le && lt;
      }
    }
    for (int i = 0; i < 3; ++i) {
      if (drop_row[i]) {
        row[i] = false;
        changed = true;
      }
      if (drop_col[i]) {
        col[i] = false;
        changed = true;
      }
    }
  }

  // Solve the reduced game: max v s.t. sum x = 1, M'x >= v on alive columns.
  auto solve_side = [&](bool transpose) {
    std::vector<int> rows_alive, cols_alive;
    for (int i = 0; i < 3; ++i) {
      if ((transpose ? col[i] : row[i])) rows_alive.push_back(i);
      if ((transpose ? row[i] : col[i])) cols_alive.push_back(i);
    }
    int nr = static_cast<int>(rows_alive.size());
    int nc = static_cast<int>(cols_alive.size());
    LpProblem lp;
    lp.cols = nr + 2 + nc;  // x, v+, v-, slack per column constraint
    lp.rows = 1 + nc;
    lp.a.assign(static_cast<std::size_t>(lp.rows) * lp.cols, 0.0);
    lp.b.assign(lp.rows, 0.0);
    lp.c.assign(lp.cols, 0.0);
    for (int i = 0; i < nr; ++i) lp.at(0, i) = 1.0;
    lp.b[0] = 1.0;
    for (int j = 0; j < nc; ++j) {
      for (int i = 0; i < nr; ++i) {
        double payoff = transpose ? -m[cols_alive[j]][rows_alive[i]]
                                  : m[rows_alive[i]][cols_alive[j]];
        lp.at(1 + j, i) = payoff;
      }
      lp.at(1 + j, nr) = -1.0;
      lp.at(1 + j, nr + 1) = 1.0;
      lp.at(1 + j, nr + 2 + j) = -1.0;
    }
    lp.c[nr] = -1.0;
    lp.c[nr + 1] = 1.0;
    LpSolution sol = solve_lp(lp);
    if (!sol.optimal) throw std::runtime_error("matrix oracle: LP failed");
    std::array<double, 3> strat{};
    for (int i = 0; i < nr; ++i) strat[rows_alive[i]] = sol.z[i];
    return std::make_pair(strat, -sol.objective);
  };

  auto [x, v] = solve_side(false);
  auto [y, v2] = solve_side(true);
  res.x = x;
  res.y = y;
  res.value = v;
  res.row_alive = row;
  res.col_alive = col;
  if (std::abs(v + v2) > 1e-9)
    throw std::runtime_error("matrix oracle: side values disagree");
  return res;
}

}  // namespace efg::oracle
