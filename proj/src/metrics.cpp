#include "efg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace efg {

BestResponseResult best_response(const Game& game, int responder,
                                 std::span<const double> opponent) {
  const Treeplex& tp = game.treeplex(responder);
  std::vector<double> val = responder == 1 ? game.payoff.multiply(opponent)
                                           : game.payoff.multiply_transposed(opponent);
  if (responder == 2)
    for (double& v : val) v = -v;  // player 2 maximizes -x'Uy

  BestResponseResult res;
  res.infoset_values.assign(tp.num_infosets(), 0.0);
  std::vector<int> pick(tp.num_infosets(), 0);
  for (int local = tp.num_infosets() - 1; local >= 0; --local) {
    double best = val[tp.sequence(local, 0)];
    int arg = 0;
    for (int a = 1; a < tp.num_actions[local]; ++a) {
      double v = val[tp.sequence(local, a)];
      if (v > best) {
        best = v;
        arg = a;
      }
    }
    res.infoset_values[local] = best;
    pick[local] = arg;
    val[tp.parent_seq[local]] += best;
  }
  res.value = val[0];

  std::vector<std::vector<double>> behavioral(tp.num_infosets());
  for (int local = 0; local < tp.num_infosets(); ++local) {
    behavioral[local].assign(tp.num_actions[local], 0.0);
    behavioral[local][pick[local]] = 1.0;
  }
  res.strategy = behavioral_to_sequence(tp, behavioral);
  return res;
}

double nash_gap(const Game& game, std::span<const double> x,
                std::span<const double> y) {
  return best_response(game, 1, y).value + best_response(game, 2, x).value;
}

namespace {

// Weighted payoff accumulation below one node: chance and the opponent
// multiply the weight, the responder's own moves only route it.
void accumulate_subtree(const Game& game, int responder,
                        const std::vector<std::vector<double>>& opp_behavioral,
                        NodeId node, double weight, std::vector<double>& g_sub) {
  if (weight == 0.0) return;
  if (const auto* t = game.tree.terminal(node)) {
    int seq = responder == 1 ? game.seq1[node] : game.seq2[node];
    g_sub[seq] += weight * (responder == 1 ? t->payoff : -t->payoff);
    return;
  }
  if (const auto* c = game.tree.chance(node)) {
    for (std::size_t i = 0; i < c->children.size(); ++i)
      accumulate_subtree(game, responder, opp_behavioral, c->children[i],
                         weight * c->probs[i], g_sub);
    return;
  }
  const auto* d = game.tree.decision(node);
  if (d->player == responder) {
    for (NodeId child : d->children)
      accumulate_subtree(game, responder, opp_behavioral, child, weight, g_sub);
  } else {
    const Treeplex& opp_tp = game.treeplex(d->player);
    int local = opp_tp.local_of_infoset[d->infoset];
    for (int a = 0; a < static_cast<int>(d->children.size()); ++a)
      accumulate_subtree(game, responder, opp_behavioral, d->children[a],
                         weight * opp_behavioral[local][a], g_sub);
  }
}

}  // namespace

InfosetRegretReport avg_infoset_regret(const Game& game, std::span<const double> x,
                                       std::span<const double> y) {
  InfosetRegretReport rep;
  rep.regret.assign(game.tree.infosets.size(), 0.0);
  rep.zero_reach_fallback.assign(game.tree.infosets.size(), false);

  std::vector<std::vector<NodeId>> nodes_of(game.tree.infosets.size());
  for (NodeId id = 0; id < static_cast<NodeId>(game.tree.nodes.size()); ++id)
    if (const auto* d = game.tree.decision(id)) nodes_of[d->infoset].push_back(id);

  BehavioralStrategy b1 = sequence_to_behavioral(game.tp1, x);
  BehavioralStrategy b2 = sequence_to_behavioral(game.tp2, y);

  int infoset_count = 0;
  double total = 0.0;
  for (int player : {1, 2}) {
    const Treeplex& tp = game.treeplex(player);
    const auto& own_b = player == 1 ? b1.probs : b2.probs;
    const auto& opp_b = player == 1 ? b2.probs : b1.probs;
    std::span<const double> opp_seq = player == 1 ? y : x;

    for (int local = 0; local < tp.num_infosets(); ++local) {
      int infoset = tp.infoset_ids[local];
      const auto& members = nodes_of[infoset];

      // Bayes' rule under "reached with probability one": chance times the
      // opponent's realization, the player's own contribution excluded.
      std::vector<double> belief(members.size());
      double z = 0.0;
      for (std::size_t i = 0; i < members.size(); ++i) {
        NodeId h = members[i];
        int opp_seq_idx = player == 1 ? game.seq2[h] : game.seq1[h];
        belief[i] = game.chance_reach[h] * opp_seq[opp_seq_idx];
        z += belief[i];
      }
      if (z > 0.0) {
        for (double& v : belief) v /= z;
      } else {
        std::fill(belief.begin(), belief.end(), 1.0 / members.size());
        rep.zero_reach_fallback[infoset] = true;
      }

      std::vector<double> g_sub(tp.num_sequences, 0.0);
      for (std::size_t i = 0; i < members.size(); ++i)
        accumulate_subtree(game, player, opp_b, members[i], belief[i], g_sub);

      // Descendant infosets of `local` inside the treeplex.
      std::vector<char> member(tp.num_infosets(), 0);
      member[local] = 1;
      for (int j = local + 1; j < tp.num_infosets(); ++j) {
        int parent = tp.parent_seq[j];
        if (parent == 0) continue;
        member[j] = member[tp.infoset_of_seq[parent]];
      }

      // Best response from this infoset downward.
      std::vector<double> val(tp.num_sequences, 0.0);
      double v_br = 0.0;
      for (int j = tp.num_infosets() - 1; j >= local; --j) {
        if (!member[j]) continue;
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < tp.num_actions[j]; ++a) {
          int seq = tp.sequence(j, a);
          double v = g_sub[seq] + val[seq];
          best = std::max(best, v);
        }
        if (j == local) {
          v_br = best;
        } else {
          val[tp.parent_seq[j]] += best;
        }
      }

      // Value of continuing with the current strategy from the infoset.
      std::vector<double> rel(tp.num_sequences, 0.0);
      double v_cur = 0.0;
      for (int j = local; j < tp.num_infosets(); ++j) {
        if (!member[j]) continue;
        double base = j == local ? 1.0 : rel[tp.parent_seq[j]];
        for (int a = 0; a < tp.num_actions[j]; ++a) {
          int seq = tp.sequence(j, a);
          rel[seq] = base * own_b[j][a];
          v_cur += g_sub[seq] * rel[seq];
        }
      }

      double regret = v_br - v_cur;
      rep.regret[infoset] = std::max(0.0, regret);
      total += rep.regret[infoset];
      ++infoset_count;
    }
  }
  rep.average = infoset_count > 0 ? total / infoset_count : 0.0;
  return rep;
}

double l2_distance(std::span<const double> x, std::span<const double> y,
                   std::span<const double> x_ref, std::span<const double> y_ref) {
  if (x.size() != x_ref.size() || y.size() != y_ref.size())
    throw std::invalid_argument("l2_distance: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - x_ref[i]) * (x[i] - x_ref[i]);
  for (std::size_t i = 0; i < y.size(); ++i) acc += (y[i] - y_ref[i]) * (y[i] - y_ref[i]);
  return std::sqrt(acc);
}

}  // namespace efg
