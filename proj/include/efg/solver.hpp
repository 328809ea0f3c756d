#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

#include "efg/dilated_entropy.hpp"
#include "efg/game.hpp"

namespace efg {

// Per-phase parameter stream: eps_k = eps0 * rho^k, lambda_k = eps_k^{-d}
// (with a hair of slack so 1/lambda_k < eps_k^d strictly), T_k = ceil(beta^k).
// Phases are indexed from k = 1.
struct Schedule {
  double beta = 1.001;
  double eta = 2.0;
  double eps0 = 0.1;
  double rho = 0.9999;
  double d = 2.0;
  bool theorem_mode = false;

  double eps(int k) const;
  double lambda(int k) const;
  std::int64_t rounds(int k) const;

  // True iff eta <= lambda_k^2 <= eta * beta^k / 2.
  bool theorem_window_ok(int k) const;
};

Schedule make_schedule(double beta, double eta, double eps0, double rho, double d,
                       bool theorem_mode = false);

// Step size honoring the last-iterate condition eta <= 1/(sqrt(2)||U||),
// with a safety factor and capped at the experimental value 2.
double stable_eta(const Game& game);

// The experimental preset: two-iteration phases, lambda = 1/eps^2, eps0 at
// the largest value the regularizer admits, and the perturbation annealed
// geometrically per iteration at the 0.9999-per-iteration rate of a 1e5
// horizon, rescaled so the total annealing depth is budget-invariant.
Schedule paper_schedule(const Game& game, std::int64_t budget_iterations = 100000);

struct TheoremModeReport {
  double operator_norm = 0.0;
  double eta_bound = 0.0;  // 1 / (sqrt(2) ||U||)
  bool eta_ok = false;
  int first_window_violation = -1;  // -1 when the window holds on [1, scanned]
  int first_window_ok = -1;         // first k where the window holds, -1 if never
  bool heuristic = false;           // any constraint fails in the scanned range
};

TheoremModeReport check_theorem_mode(const Schedule& s, const Game& game,
                                     int max_phase = 200);

struct TraceRecord {
  std::int64_t iteration = 0;
  int phase = 0;
  double lambda = 0.0;
  double eps = 0.0;
  double nash_gap = 0.0;
  double avg_infoset_regret = 0.0;
  double l2_ref = std::numeric_limits<double>::quiet_NaN();
  double elapsed_s = 0.0;
  // Filled only when RecordOptions::keep_strategies is set.
  std::vector<double> x, y;
};

struct Trace {
  std::vector<TraceRecord> records;
  int feasibility_violations = 0;  // recorded iterates failing flow/eps checks
  bool heuristic_schedule = false;
};

struct ReferenceProfile {
  std::vector<double> x, y;
};

struct RecordOptions {
  std::int64_t every = 0;      // record every N iterations (0 = off)
  double geometric = 0.0;      // record when iter >= ratio * last (0 = off)
  bool at_phase_end = true;
  bool final_only = false;     // suppress everything but the first/last record
  bool keep_strategies = false;
  std::optional<ReferenceProfile> reference;
};

struct Budget {
  std::int64_t max_iterations = std::numeric_limits<std::int64_t>::max();
  double max_seconds = std::numeric_limits<double>::infinity();
};

// Current and intermediate iterates of the optimistic scheme.
struct PhaseIterate {
  SequenceStrategy x, y, x_half, y_half;
};

PhaseIterate uniform_iterate(const Game& game);

// Hook runs after each round; return false to stop the phase early.
using RoundHook = std::function<bool(std::int64_t, const PhaseIterate&)>;

// T rounds of the optimistic composite prox scheme on the regularized-
// perturbed game (lambda may be +infinity). Both dgfs must share the phase's
// eps. Returns the final full and half iterates for warm starting.
PhaseIterate solve_phase(const Game& game, const PerturbedDgf& dgf1,
                         const PerturbedDgf& dgf2, double lambda, double eta,
                         std::int64_t rounds, PhaseIterate init,
                         const RoundHook& hook = {});

struct SolveResult {
  Trace trace;
  SequenceStrategy x, y;
  int phases_run = 0;
  std::int64_t iterations = 0;
};

// Phase loop of the last-iterate EFPE tracker; warm-starts every phase from
// the previous phase's final full iterate. Rejects schedules whose eps0
// exceeds the game's feasibility bound.
SolveResult compute_efpe(const Game& game, const Schedule& schedule,
                         const Budget& budget, const RecordOptions& rec = {});

// Fixed-eps optimistic baseline: lambda = +infinity, single phase of T
// rounds, last-iterate reporting. eps_fixed = 0 gives the plain optimistic
// method.
SolveResult oomd_baseline(const Game& game, double eps_fixed, double eta,
                          std::int64_t rounds, const RecordOptions& rec = {});

}  // namespace efg
