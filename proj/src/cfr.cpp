#include "efg/cfr.hpp"

#include <chrono>
#include <cmath>

#include "efg/metrics.hpp"

namespace efg {

namespace {

struct PlayerTable {
  const Treeplex* tp;
  std::vector<std::vector<double>> current;   // behavioral, regret-matched
  std::vector<std::vector<double>> regret;    // cumulative counterfactual regret
  std::vector<std::vector<double>> strat_sum; // reach-weighted strategy sum

  explicit PlayerTable(const Treeplex& t) : tp(&t) {
    current.resize(tp->num_infosets());
    regret.resize(tp->num_infosets());
    strat_sum.resize(tp->num_infosets());
    for (int i = 0; i < tp->num_infosets(); ++i) {
      current[i].assign(tp->num_actions[i], 1.0 / tp->num_actions[i]);
      regret[i].assign(tp->num_actions[i], 0.0);
      strat_sum[i].assign(tp->num_actions[i], 0.0);
    }
  }

  void rematch() {
    for (int i = 0; i < tp->num_infosets(); ++i) {
      double positive = 0.0;
      for (double r : regret[i]) positive += std::max(r, 0.0);
      if (positive > 0.0) {
        for (int a = 0; a < tp->num_actions[i]; ++a)
          current[i][a] = std::max(regret[i][a], 0.0) / positive;
      } else {
        for (int a = 0; a < tp->num_actions[i]; ++a)
          current[i][a] = 1.0 / tp->num_actions[i];
      }
    }
  }

  SequenceStrategy average() const {
    std::vector<std::vector<double>> probs(tp->num_infosets());
    for (int i = 0; i < tp->num_infosets(); ++i) {
      double total = 0.0;
      for (double s : strat_sum[i]) total += s;
      probs[i].assign(tp->num_actions[i], 1.0 / tp->num_actions[i]);
      if (total > 0.0)
        for (int a = 0; a < tp->num_actions[i]; ++a)
          probs[i][a] = strat_sum[i][a] / total;
    }
    return behavioral_to_sequence(*tp, probs);
  }
};

}  // namespace

CfrResult cfr(const Game& game, std::int64_t iterations, const RecordOptions& rec) {
  CfrResult res;
  PlayerTable t1(game.tp1), t2(game.tp2);
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  };

  // Expected player-1 utility below `node`; accumulates counterfactual
  // regrets and the reach-weighted strategy sums for both players at once.
  std::function<double(NodeId, double, double, double)> walk =
      [&](NodeId node, double r1, double r2, double rc) -> double {
    if (const auto* term = game.tree.terminal(node)) return term->payoff;
    if (const auto* c = game.tree.chance(node)) {
      double u = 0.0;
      for (std::size_t i = 0; i < c->children.size(); ++i)
        u += c->probs[i] * walk(c->children[i], r1, r2, rc * c->probs[i]);
      return u;
    }
    const auto* d = game.tree.decision(node);
    PlayerTable& mine = d->player == 1 ? t1 : t2;
    int local = mine.tp->local_of_infoset[d->infoset];
    const std::vector<double>& b = mine.current[local];
    int n = static_cast<int>(d->children.size());

    double u = 0.0;
    double action_u[16];
    std::vector<double> action_u_big;
    double* au = n <= 16 ? action_u : (action_u_big.resize(n), action_u_big.data());
    for (int a = 0; a < n; ++a) {
      au[a] = walk(d->children[a], d->player == 1 ? r1 * b[a] : r1,
                   d->player == 2 ? r2 * b[a] : r2, rc);
      u += b[a] * au[a];
    }
    double own_reach = d->player == 1 ? r1 : r2;
    double cf_reach = (d->player == 1 ? r2 : r1) * rc;
    double sign = d->player == 1 ? 1.0 : -1.0;
    for (int a = 0; a < n; ++a) {
      mine.regret[local][a] += cf_reach * sign * (au[a] - u);
      mine.strat_sum[local][a] += own_reach * b[a];
    }
    return u;
  };

  std::int64_t last_record = 0;
  auto maybe_record = [&](std::int64_t iter, bool force) {
    if (rec.final_only && !force) return;
    bool due = force;
    if (!due && rec.every > 0 && iter - last_record >= rec.every) due = true;
    if (!due && rec.geometric > 1.0 &&
        static_cast<double>(iter) >= rec.geometric * std::max<std::int64_t>(1, last_record))
      due = true;
    if (!due) return;
    SequenceStrategy ax = t1.average();
    SequenceStrategy ay = t2.average();
    TraceRecord r;
    r.iteration = iter;
    r.phase = 0;
    r.lambda = std::numeric_limits<double>::infinity();
    r.eps = 0.0;
    r.nash_gap = nash_gap(game, ax.values, ay.values);
    r.avg_infoset_regret = avg_infoset_regret(game, ax.values, ay.values).average;
    if (rec.reference)
      r.l2_ref = l2_distance(ax.values, ay.values, rec.reference->x, rec.reference->y);
    r.elapsed_s = elapsed();
    if (flow_violation(game.tp1, ax.values) > kStrategyTol ||
        flow_violation(game.tp2, ay.values) > kStrategyTol)
      ++res.trace.feasibility_violations;
    if (rec.keep_strategies) {
      r.x = std::move(ax.values);
      r.y = std::move(ay.values);
    }
    res.trace.records.push_back(std::move(r));
    last_record = iter;
  };

  maybe_record(0, true);
  for (std::int64_t t = 1; t <= iterations; ++t) {
    walk(game.tree.root, 1.0, 1.0, 1.0);
    t1.rematch();
    t2.rematch();
    maybe_record(t, t == iterations);
  }
  res.avg_x = t1.average();
  res.avg_y = t2.average();
  res.iterations = iterations;
  return res;
}

}  // namespace efg
