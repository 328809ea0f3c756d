#include "efg/payoff_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace efg {

std::vector<double> PayoffMatrix::multiply(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != cols)
    throw std::invalid_argument("payoff multiply: dimension mismatch");
  std::vector<double> out(rows, 0.0);
  for (const Entry& e : entries) out[e.row] += e.value * y[e.col];
  return out;
}

std::vector<double> PayoffMatrix::multiply_transposed(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != rows)
    throw std::invalid_argument("payoff multiply_transposed: dimension mismatch");
  std::vector<double> out(cols, 0.0);
  for (const Entry& e : entries) out[e.col] += e.value * x[e.row];
  return out;
}

double PayoffMatrix::bilinear(std::span<const double> x,
                              std::span<const double> y) const {
  if (static_cast<int>(x.size()) != rows || static_cast<int>(y.size()) != cols)
    throw std::invalid_argument("payoff bilinear: dimension mismatch");
  double acc = 0.0;
  for (const Entry& e : entries) acc += x[e.row] * e.value * y[e.col];
  return acc;
}

PayoffMatrix build_payoff_matrix(const GameTree& tree, const Treeplex& tp1,
                                 const Treeplex& tp2) {
  PayoffMatrix op;
  op.rows = tp1.num_sequences;
  op.cols = tp2.num_sequences;

  struct Frame {
    NodeId id;
    int s1, s2;
    double chance;
  };
  std::vector<Frame> stack;
  std::vector<PayoffMatrix::Entry> raw;
  stack.push_back({tree.root, 0, 0, 1.0});
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    if (const auto* t = tree.terminal(fr.id)) {
      if (t->payoff != 0.0) raw.push_back({fr.s1, fr.s2, fr.chance * t->payoff});
    } else if (const auto* c = tree.chance(fr.id)) {
      for (std::size_t i = 0; i < c->children.size(); ++i)
        stack.push_back({c->children[i], fr.s1, fr.s2, fr.chance * c->probs[i]});
    } else if (const auto* d = tree.decision(fr.id)) {
      const Treeplex& tp = d->player == 1 ? tp1 : tp2;
      int local = tp.local_of_infoset[d->infoset];
      if (local < 0) throw std::logic_error("payoff build: infoset missing from treeplex");
      for (int a = 0; a < static_cast<int>(d->children.size()); ++a) {
        int seq = tp.sequence(local, a);
        stack.push_back({d->children[a], d->player == 1 ? seq : fr.s1,
                         d->player == 2 ? seq : fr.s2, fr.chance});
      }
    }
  }

  // Terminals sharing a sequence pair are summed into one entry.
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (const auto& e : raw) {
    if (!op.entries.empty() && op.entries.back().row == e.row &&
        op.entries.back().col == e.col) {
      op.entries.back().value += e.value;
    } else {
      op.entries.push_back(e);
    }
  }
  return op;
}

OperatorNormResult operator_norm(const PayoffMatrix& op, double tol,
                                 int max_iterations) {
  if (tol <= 0.0) throw std::invalid_argument("operator_norm: tol must be positive");
  OperatorNormResult res;
  if (op.entries.empty() || op.cols == 0 || op.rows == 0) {
    res.converged = true;
    return res;
  }
  // Deterministic start with a mild ramp so eigenvectors orthogonal to the
  // all-ones vector are still picked up.
  std::vector<double> v(op.cols);
  double norm = 0.0;
  for (int i = 0; i < op.cols; ++i) {
    v[i] = 1.0 + 1e-3 * i;
    norm += v[i] * v[i];
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;

  double sigma_prev = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    std::vector<double> uv = op.multiply(v);
    double uv_norm = 0.0;
    for (double x : uv) uv_norm += x * x;
    uv_norm = std::sqrt(uv_norm);
    res.value = uv_norm;
    res.iterations = it;
    if (uv_norm == 0.0) {
      res.converged = true;  // v in the null space and nothing larger found
      return res;
    }
    std::vector<double> w = op.multiply_transposed(uv);
    double w_norm = 0.0;
    for (double x : w) w_norm += x * x;
    w_norm = std::sqrt(w_norm);
    if (w_norm == 0.0) {
      res.converged = true;
      return res;
    }
    for (int i = 0; i < op.cols; ++i) v[i] = w[i] / w_norm;
    if (it > 1 && std::abs(uv_norm - sigma_prev) <= tol * std::max(uv_norm, 1e-300)) {
      res.converged = true;
      return res;
    }
    sigma_prev = uv_norm;
  }
  return res;
}

}  // namespace efg
