#include "efg/treeplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace efg {

Treeplex build_treeplex(const GameTree& tree, int player) {
  if (player != 1 && player != 2) throw std::invalid_argument("player must be 1 or 2");
  Treeplex tp;
  tp.player = player;
  tp.local_of_infoset.assign(tree.infosets.size(), -1);

  // Depth-first discovery keeps ancestors ahead of descendants: the parent
  // sequence of an infoset is created when its owning infoset is first seen,
  // which happens strictly earlier on the same root path.
  struct Frame {
    NodeId id;
    int own_seq;  // player's sequence index on the path to this node
  };
  std::vector<Frame> stack;
  stack.push_back({tree.root, 0});
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    if (const auto* d = tree.decision(fr.id)) {
      int next_base = fr.own_seq;
      if (d->player == player) {
        int local = tp.local_of_infoset[d->infoset];
        if (local < 0) {
          local = tp.num_infosets();
          tp.local_of_infoset[d->infoset] = local;
          tp.infoset_ids.push_back(d->infoset);
          tp.num_actions.push_back(static_cast<int>(d->actions.size()));
          tp.first_sequence.push_back(tp.num_sequences);
          tp.parent_seq.push_back(fr.own_seq);
          tp.num_sequences += static_cast<int>(d->actions.size());
        } else if (tp.parent_seq[local] != fr.own_seq) {
          throw std::logic_error("treeplex build on tree without perfect recall");
        }
        next_base = tp.first_sequence[local];
        for (int a = static_cast<int>(d->children.size()) - 1; a >= 0; --a)
          stack.push_back({d->children[a], next_base + a});
      } else {
        for (int a = static_cast<int>(d->children.size()) - 1; a >= 0; --a)
          stack.push_back({d->children[a], fr.own_seq});
      }
    } else if (const auto* c = tree.chance(fr.id)) {
      for (auto it = c->children.rbegin(); it != c->children.rend(); ++it)
        stack.push_back({*it, fr.own_seq});
    }
  }

  tp.infoset_of_seq.assign(tp.num_sequences, -1);
  tp.children_of_seq.assign(tp.num_sequences, {});
  for (int local = 0; local < tp.num_infosets(); ++local) {
    for (int a = 0; a < tp.num_actions[local]; ++a)
      tp.infoset_of_seq[tp.sequence(local, a)] = local;
    tp.children_of_seq[tp.parent_seq[local]].push_back(local);
  }
  return tp;
}

double flow_violation(const Treeplex& tp, std::span<const double> x) {
  if (static_cast<int>(x.size()) != tp.num_sequences)
    throw std::invalid_argument("strategy dimension mismatch");
  double worst = std::abs(x[0] - 1.0);
  for (double v : x) {
    if (v < 0.0) worst = std::max(worst, -v);
    if (v > 1.0) worst = std::max(worst, v - 1.0);
  }
  for (int local = 0; local < tp.num_infosets(); ++local) {
    double sum = 0.0;
    for (int a = 0; a < tp.num_actions[local]; ++a) sum += x[tp.sequence(local, a)];
    worst = std::max(worst, std::abs(sum - x[tp.parent_seq[local]]));
  }
  return worst;
}

bool is_valid_strategy(const Treeplex& tp, std::span<const double> x, double tol) {
  return flow_violation(tp, x) <= tol;
}

bool validate_perturbed(const Treeplex& tp, std::span<const double> x, double eps) {
  for (int local = 0; local < tp.num_infosets(); ++local) {
    double parent = x[tp.parent_seq[local]];
    for (int a = 0; a < tp.num_actions[local]; ++a) {
      if (x[tp.sequence(local, a)] < eps * parent - 1e-12) return false;
    }
  }
  return true;
}

SequenceStrategy uniform_strategy(const Treeplex& tp) {
  std::vector<std::vector<double>> probs(tp.num_infosets());
  for (int local = 0; local < tp.num_infosets(); ++local)
    probs[local].assign(tp.num_actions[local], 1.0 / tp.num_actions[local]);
  return behavioral_to_sequence(tp, probs);
}

SequenceStrategy behavioral_to_sequence(const Treeplex& tp,
                                        const std::vector<std::vector<double>>& probs) {
  if (static_cast<int>(probs.size()) != tp.num_infosets())
    throw std::invalid_argument("behavioral strategy dimension mismatch");
  SequenceStrategy x;
  x.player = tp.player;
  x.values.assign(tp.num_sequences, 0.0);
  x.values[0] = 1.0;
  for (int local = 0; local < tp.num_infosets(); ++local) {
    if (static_cast<int>(probs[local].size()) != tp.num_actions[local])
      throw std::invalid_argument("behavioral point has wrong action count");
    double parent = x.values[tp.parent_seq[local]];
    for (int a = 0; a < tp.num_actions[local]; ++a)
      x.values[tp.sequence(local, a)] = parent * probs[local][a];
  }
  return x;
}

BehavioralStrategy sequence_to_behavioral(const Treeplex& tp,
                                          std::span<const double> x) {
  if (static_cast<int>(x.size()) != tp.num_sequences)
    throw std::invalid_argument("strategy dimension mismatch");
  BehavioralStrategy b;
  b.player = tp.player;
  b.probs.resize(tp.num_infosets());
  for (int local = 0; local < tp.num_infosets(); ++local) {
    int n = tp.num_actions[local];
    b.probs[local].assign(n, 0.0);
    double parent = x[tp.parent_seq[local]];
    if (parent > 0.0) {
      for (int a = 0; a < n; ++a) b.probs[local][a] = x[tp.sequence(local, a)] / parent;
    } else {
      // Any simplex point is consistent at zero realization mass; emit the
      // uniform one and flag the infoset.
      for (int a = 0; a < n; ++a) b.probs[local][a] = 1.0 / n;
      b.uniform_filled.push_back(local);
    }
  }
  return b;
}

}  // namespace efg
