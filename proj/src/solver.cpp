#include "efg/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "efg/metrics.hpp"

namespace efg {

double Schedule::eps(int k) const { return eps0 * std::pow(rho, k); }

double Schedule::lambda(int k) const {
  return std::pow(eps(k), -d) * (1.0 + 1e-9);
}

std::int64_t Schedule::rounds(int k) const {
  double t = std::ceil(std::pow(beta, k));
  if (t >= 9.2e18) return std::numeric_limits<std::int64_t>::max();
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(t));
}

bool Schedule::theorem_window_ok(int k) const {
  double l2 = lambda(k) * lambda(k);
  return eta <= l2 && l2 <= eta * std::pow(beta, k) / 2.0;
}

Schedule make_schedule(double beta, double eta, double eps0, double rho, double d,
                       bool theorem_mode) {
  if (!(beta > 1.0)) throw std::invalid_argument("schedule: beta must be > 1");
  if (!(eta > 0.0)) throw std::invalid_argument("schedule: eta must be > 0");
  if (!(eps0 > 0.0) || eps0 >= 0.5)
    throw std::invalid_argument("schedule: eps0 must lie in (0, 1/2)");
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("schedule: rho must lie in (0,1)");
  if (!(d > 0.0)) throw std::invalid_argument("schedule: d must be > 0");
  Schedule s;
  s.beta = beta;
  s.eta = eta;
  s.eps0 = eps0;
  s.rho = rho;
  s.d = d;
  s.theorem_mode = theorem_mode;
  return s;
}

double stable_eta(const Game& game) {
  OperatorNormResult norm = operator_norm(game.payoff, 1e-7);
  if (norm.value <= 0.0) return 2.0;
  return std::min(2.0, 0.9 / (std::sqrt(2.0) * norm.value));
}

Schedule paper_schedule(const Game& game, std::int64_t budget_iterations) {
  // beta barely above 1 pins every phase at two rounds over any practical
  // horizon, so rho per phase is the per-iteration factor squared. The
  // 0.9999-per-iteration anneal of a 1e5-iteration run is rescaled so the
  // total annealing depth stays the same at any budget.
  if (budget_iterations <= 0) budget_iterations = 100000;
  const double rho_iter = std::exp(-10.0 / static_cast<double>(budget_iterations));
  return make_schedule(1.0 + 1e-9, stable_eta(game), game.min_eps_bound,
                       rho_iter * rho_iter, 2.0, false);
}

TheoremModeReport check_theorem_mode(const Schedule& s, const Game& game,
                                     int max_phase) {
  TheoremModeReport rep;
  OperatorNormResult norm = operator_norm(game.payoff, 1e-9);
  rep.operator_norm = norm.value;
  rep.eta_bound = norm.value > 0.0 ? 1.0 / (std::sqrt(2.0) * norm.value)
                                   : std::numeric_limits<double>::infinity();
  rep.eta_ok = s.eta <= rep.eta_bound;
  for (int k = 1; k <= max_phase; ++k) {
    bool ok = s.theorem_window_ok(k);
    if (!ok && rep.first_window_violation < 0) rep.first_window_violation = k;
    if (ok && rep.first_window_ok < 0) rep.first_window_ok = k;
  }
  rep.heuristic = !rep.eta_ok || rep.first_window_violation >= 0;
  return rep;
}

PhaseIterate uniform_iterate(const Game& game) {
  PhaseIterate z;
  z.x = uniform_strategy(game.tp1);
  z.y = uniform_strategy(game.tp2);
  z.x_half = z.x;
  z.y_half = z.y;
  return z;
}

PhaseIterate solve_phase(const Game& game, const PerturbedDgf& dgf1,
                         const PerturbedDgf& dgf2, double lambda, double eta,
                         std::int64_t rounds, PhaseIterate init,
                         const RoundHook& hook) {
  ProxParams params{lambda, eta};
  PhaseIterate z = std::move(init);
  std::vector<double> neg_utx(game.tp2.num_sequences);
  for (std::int64_t t = 0; t < rounds; ++t) {
    // Both players' updates consume the round-start iterates; the minimizing
    // player's gradient is negated so one maximizing prox kernel serves both.
    std::vector<double> uy = game.payoff.multiply(z.y.values);
    std::vector<double> utx = game.payoff.multiply_transposed(z.x.values);
    for (std::size_t i = 0; i < utx.size(); ++i) neg_utx[i] = -utx[i];

    z.x_half = composite_prox(dgf1, params, uy, z.x_half.values);
    z.x = composite_prox(dgf1, params, uy, z.x_half.values);
    z.y_half = composite_prox(dgf2, params, neg_utx, z.y_half.values);
    z.y = composite_prox(dgf2, params, neg_utx, z.y_half.values);

    if (hook && !hook(t + 1, z)) break;
  }
  return z;
}

namespace {

class Recorder {
 public:
  Recorder(const Game& game, const RecordOptions& rec, Trace& trace)
      : game_(game), rec_(rec), trace_(trace),
        start_(std::chrono::steady_clock::now()) {}

  bool due(std::int64_t iter, bool phase_end) const {
    if (rec_.final_only) return false;
    if (rec_.every > 0 || rec_.geometric > 1.0) {
      if (rec_.every > 0 && iter - last_iter_ >= rec_.every) return true;
      if (rec_.geometric > 1.0 &&
          static_cast<double>(iter) >=
              rec_.geometric * static_cast<double>(std::max<std::int64_t>(1, last_iter_)))
        return true;
      return false;
    }
    return rec_.at_phase_end && phase_end;
  }

  void record(std::int64_t iter, int phase, double lambda, double eps,
              const SequenceStrategy& x, const SequenceStrategy& y) {
    TraceRecord r;
    r.iteration = iter;
    r.phase = phase;
    r.lambda = lambda;
    r.eps = eps;
    r.nash_gap = nash_gap(game_, x.values, y.values);
    r.avg_infoset_regret = avg_infoset_regret(game_, x.values, y.values).average;
    if (rec_.reference)
      r.l2_ref = l2_distance(x.values, y.values, rec_.reference->x, rec_.reference->y);
    r.elapsed_s = elapsed();
    if (flow_violation(game_.tp1, x.values) > kStrategyTol ||
        flow_violation(game_.tp2, y.values) > kStrategyTol ||
        !validate_perturbed(game_.tp1, x.values, eps) ||
        !validate_perturbed(game_.tp2, y.values, eps))
      ++trace_.feasibility_violations;
    if (rec_.keep_strategies) {
      r.x = x.values;
      r.y = y.values;
    }
    trace_.records.push_back(std::move(r));
    last_iter_ = iter;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  const Game& game_;
  const RecordOptions& rec_;
  Trace& trace_;
  std::chrono::steady_clock::time_point start_;
  std::int64_t last_iter_ = 0;
};

}  // namespace

SolveResult compute_efpe(const Game& game, const Schedule& schedule,
                         const Budget& budget, const RecordOptions& rec) {
  if (schedule.eps(1) > game.min_eps_bound + 1e-15)
    throw std::invalid_argument(
        "schedule infeasible: eps exceeds min_I 1/(2 n_I) for this game");

  SolveResult res;
  if (schedule.theorem_mode)
    res.trace.heuristic_schedule = check_theorem_mode(schedule, game).heuristic;

  Recorder recorder(game, rec, res.trace);
  PhaseIterate z = uniform_iterate(game);
  recorder.record(0, 0, schedule.lambda(1), schedule.eps(1), z.x, z.y);

  std::int64_t done = 0;
  int k = 0;
  while (done < budget.max_iterations && recorder.elapsed() < budget.max_seconds) {
    ++k;
    const double eps_k = schedule.eps(k);
    const double lambda_k = schedule.lambda(k);
    const std::int64_t T_k =
        std::min(schedule.rounds(k), budget.max_iterations - done);
    PerturbedDgf dgf1(game.tp1, eps_k);
    PerturbedDgf dgf2(game.tp2, eps_k);

    std::int64_t base = done;
    std::int64_t executed = 0;
    auto hook = [&](std::int64_t t, const PhaseIterate& it) {
      executed = t;
      std::int64_t iter = base + t;
      bool phase_end = t == T_k;
      if (recorder.due(iter, phase_end))
        recorder.record(iter, k, lambda_k, eps_k, it.x, it.y);
      return recorder.elapsed() < budget.max_seconds;
    };
    z = solve_phase(game, dgf1, dgf2, lambda_k, schedule.eta, T_k, std::move(z), hook);
    done += executed;

    // Warm start: the optimistic chain continues across the phase boundary;
    // both the full and half iterates stay feasible since eps shrinks.
    // Collapsing the halves onto the full iterate each phase destabilizes
    // the scheme when phases are short.
    res.phases_run = k;
  }
  res.iterations = done;
  if (!res.trace.records.empty() && res.trace.records.back().iteration != done) {
    int kk = std::max(1, k);
    recorder.record(done, kk, schedule.lambda(kk), schedule.eps(kk), z.x, z.y);
  }
  res.x = std::move(z.x);
  res.y = std::move(z.y);
  return res;
}

SolveResult oomd_baseline(const Game& game, double eps_fixed, double eta,
                          std::int64_t rounds, const RecordOptions& rec) {
  if (eps_fixed > game.min_eps_bound + 1e-15)
    throw std::invalid_argument("oomd: eps exceeds min_I 1/(2 n_I) for this game");
  SolveResult res;
  Recorder recorder(game, rec, res.trace);
  const double inf = std::numeric_limits<double>::infinity();
  PerturbedDgf dgf1(game.tp1, eps_fixed);
  PerturbedDgf dgf2(game.tp2, eps_fixed);
  PhaseIterate z = uniform_iterate(game);
  recorder.record(0, 0, inf, eps_fixed, z.x, z.y);
  auto hook = [&](std::int64_t t, const PhaseIterate& it) {
    if (recorder.due(t, t == rounds)) recorder.record(t, 1, inf, eps_fixed, it.x, it.y);
    return true;
  };
  z = solve_phase(game, dgf1, dgf2, inf, eta, rounds, std::move(z), hook);
  if (!res.trace.records.empty() && res.trace.records.back().iteration != rounds)
    recorder.record(rounds, 1, inf, eps_fixed, z.x, z.y);
  res.phases_run = 1;
  res.iterations = rounds;
  res.x = std::move(z.x);
  res.y = std::move(z.y);
  return res;
}

}  // namespace efg
