#include "efg/dilated_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace efg {

namespace {

// Keeps behavioral ratios inside the log domain before evaluating the local
// entropy; the prox keeps iterates interior, this only guards float slop.
inline double clamp_behavioral(double b, double eps) {
  return std::min(std::max(b, eps + 1e-15), 1.0);
}

}  // namespace

RegularizerWeights compute_weights(const Treeplex& tp) {
  RegularizerWeights w;
  w.alpha.assign(tp.num_infosets(), 0.0);
  // Reverse topological order: descendants first.
  for (int local = tp.num_infosets() - 1; local >= 0; --local) {
    double best = 0.0;
    for (int a = 0; a < tp.num_actions[local]; ++a) {
      double sum = 0.0;
      for (int child : tp.children_of_seq[tp.sequence(local, a)]) sum += w.alpha[child];
      best = std::max(best, sum);
    }
    w.alpha[local] = 2.0 + 2.0 * best;
  }
  return w;
}

double local_dgf(std::span<const double> w, double eps) {
  double acc = 0.0;
  for (double v : w) {
    double shifted = v - eps;
    if (!(shifted > 0.0)) throw std::domain_error("local_dgf: coordinate <= eps");
    acc += shifted * std::log(shifted);
  }
  return acc;
}

std::vector<double> local_dgf_gradient(std::span<const double> w, double eps) {
  std::vector<double> g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    double shifted = w[i] - eps;
    if (!(shifted > 0.0))
      throw std::domain_error("local_dgf_gradient: coordinate <= eps");
    g[i] = 1.0 + std::log(shifted);
  }
  return g;
}

std::vector<double> local_conjugate_gradient(std::span<const double> g, double eps) {
  const std::size_t n = g.size();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : g) hi = std::max(hi, v);
  std::vector<double> out(n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(g[i] - hi);
    z += out[i];
  }
  double scale = (1.0 - eps * static_cast<double>(n)) / z;
  for (double& v : out) v = scale * v + eps;
  return out;
}

PerturbedDgf::PerturbedDgf(const Treeplex& tp, double eps) : tp_(&tp), eps_(eps) {
  if (eps < 0.0) throw std::invalid_argument("PerturbedDgf: eps must be >= 0");
  if (eps > max_feasible_eps_impl(tp))
    throw std::invalid_argument("PerturbedDgf: eps exceeds min_I 1/(2 n_I)");
  weights_ = compute_weights(tp);
}

double PerturbedDgf::max_feasible_eps_impl(const Treeplex& tp) {
  double bound = 0.5;  // harmless when the player has no infosets
  for (int n : tp.num_actions) bound = std::min(bound, 1.0 / (2.0 * n));
  return bound;
}

double PerturbedDgf::max_feasible_eps() const { return max_feasible_eps_impl(*tp_); }

double PerturbedDgf::value_bound() const {
  double c = 0.0;
  for (int local = 0; local < tp_->num_infosets(); ++local)
    c += weights_.alpha[local] * std::log(2.0 * tp_->num_actions[local]);
  return c;
}

double PerturbedDgf::value(std::span<const double> x) const {
  const Treeplex& tp = *tp_;
  double acc = 0.0;
  std::vector<double> b;
  for (int local = 0; local < tp.num_infosets(); ++local) {
    double parent = x[tp.parent_seq[local]];
    if (parent <= 0.0) continue;  // limit convention: t d(c/t) -> 0
    int n = tp.num_actions[local];
    b.resize(n);
    for (int a = 0; a < n; ++a)
      b[a] = clamp_behavioral(x[tp.sequence(local, a)] / parent, eps_);
    acc += weights_.alpha[local] * parent * local_dgf(b, eps_);
  }
  return acc;
}

std::vector<double> PerturbedDgf::gradient(std::span<const double> x) const {
  const Treeplex& tp = *tp_;
  std::vector<double> out(tp.num_sequences, 0.0);
  std::vector<double> b;
  for (int local = 0; local < tp.num_infosets(); ++local) {
    double parent = x[tp.parent_seq[local]];
    if (!(parent > 0.0))
      throw std::domain_error("dgf gradient requires interior strategies");
    int n = tp.num_actions[local];
    b.resize(n);
    for (int a = 0; a < n; ++a)
      b[a] = clamp_behavioral(x[tp.sequence(local, a)] / parent, eps_);
    double alpha = weights_.alpha[local];
    double local_value = local_dgf(b, eps_);
    std::vector<double> lg = local_dgf_gradient(b, eps_);
    double dot = 0.0;
    for (int a = 0; a < n; ++a) {
      out[tp.sequence(local, a)] += alpha * lg[a];
      dot += b[a] * lg[a];
    }
    out[tp.parent_seq[local]] += alpha * (local_value - dot);
  }
  return out;
}

SequenceStrategy PerturbedDgf::conjugate_gradient(std::span<const double> g) const {
  const Treeplex& tp = *tp_;
  std::vector<double> work(g.begin(), g.end());
  std::vector<std::vector<double>> behavioral(tp.num_infosets());
  // Bottom-up: take the local conjugate at g[I]/alpha_I, then roll the local
  // optimum's value into the parent sequence entry.
  for (int local = tp.num_infosets() - 1; local >= 0; --local) {
    int n = tp.num_actions[local];
    double alpha = weights_.alpha[local];
    std::vector<double> scaled(n);
    for (int a = 0; a < n; ++a) scaled[a] = work[tp.sequence(local, a)] / alpha;
    std::vector<double> w = local_conjugate_gradient(scaled, eps_);
    double value = 0.0;
    for (int a = 0; a < n; ++a) value += w[a] * work[tp.sequence(local, a)];
    value -= alpha * local_dgf(w, eps_);
    work[tp.parent_seq[local]] += value;
    behavioral[local] = std::move(w);
  }
  return behavioral_to_sequence(tp, behavioral);
}

double PerturbedDgf::bregman(std::span<const double> x,
                             std::span<const double> anchor) const {
  std::vector<double> g = gradient(anchor);
  double acc = value(x) - value(anchor);
  for (std::size_t i = 0; i < g.size(); ++i) acc -= g[i] * (x[i] - anchor[i]);
  return acc;
}

SequenceStrategy composite_prox(const PerturbedDgf& dgf, const ProxParams& params,
                                std::span<const double> g,
                                std::span<const double> anchor) {
  if (!(params.eta > 0.0)) throw std::invalid_argument("composite_prox: eta must be > 0");
  if (!params.unregularized() && !(params.lambda > 0.0))
    throw std::invalid_argument("composite_prox: lambda must be > 0");
  const double gamma = params.gamma();
  std::vector<double> anchor_grad = dgf.gradient(anchor);
  std::vector<double> tilted(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    tilted[i] = gamma * g[i] + (gamma / params.eta) * anchor_grad[i];
  return dgf.conjugate_gradient(tilted);
}

}  // namespace efg
