#pragma once

#include <limits>
#include <span>
#include <vector>

#include "efg/treeplex.hpp"

namespace efg {

// Dilation weights alpha_I = 2 + 2 max_a sum_{J in C(I,a)} alpha_J,
// evaluated bottom-up; integers in exact arithmetic.
struct RegularizerWeights {
  std::vector<double> alpha;  // per local infoset
};

RegularizerWeights compute_weights(const Treeplex& tp);

// Perturbed negative entropy on a simplex: d(w) = (w - eps)' log(w - eps).
// Requires w[a] > eps; throws std::domain_error otherwise.
double local_dgf(std::span<const double> w, double eps);
std::vector<double> local_dgf_gradient(std::span<const double> w, double eps);

// argmax_{w in simplex} { w'g - d(w) } = (1 - eps*n) softmax(g) + eps,
// computed with max-subtracted exponentials. Every coordinate is >= eps.
std::vector<double> local_conjugate_gradient(std::span<const double> g, double eps);

// Perturbed dilated entropy over one player's treeplex.
class PerturbedDgf {
 public:
  PerturbedDgf(const Treeplex& tp, double eps);

  const Treeplex& treeplex() const { return *tp_; }
  double eps() const { return eps_; }
  const RegularizerWeights& weights() const { return weights_; }

  // Upper bound sum_I alpha_I log(2 n_I) on |value| when eps <= min 1/(2 n_I).
  double value_bound() const;

  // Largest eps the footnote bound allows on this treeplex.
  double max_feasible_eps() const;

  // d(x); unreached infosets (zero parent mass) contribute zero.
  double value(std::span<const double> x) const;

  // Gradient over the player's sequences; requires interior x.
  std::vector<double> gradient(std::span<const double> x) const;

  // argmax_x { x'g - d(x) } via the bottom-up prox decomposition followed by
  // the top-down behavioral-to-sequence conversion. The output satisfies
  // flow conservation and is eps-feasible by construction.
  SequenceStrategy conjugate_gradient(std::span<const double> g) const;

  // D(x | anchor) = d(x) - d(anchor) - grad d(anchor)' (x - anchor).
  double bregman(std::span<const double> x, std::span<const double> anchor) const;

 private:
  static double max_feasible_eps_impl(const Treeplex& tp);

  const Treeplex* tp_;
  double eps_;
  RegularizerWeights weights_;
};

// Prox-step parameters; lambda = +infinity means no regularization term, in
// which case gamma reduces to eta.
struct ProxParams {
  double lambda = std::numeric_limits<double>::infinity();
  double eta = 1.0;

  bool unregularized() const { return !(lambda < std::numeric_limits<double>::infinity()); }
  double gamma() const { return unregularized() ? eta : 1.0 / (1.0 / eta + 1.0 / lambda); }
};

// argmax_x { x'g - d(x)/lambda - D(x|anchor)/eta }, computed as the
// conjugate gradient at gamma*g + (gamma/eta) grad d(anchor).
SequenceStrategy composite_prox(const PerturbedDgf& dgf, const ProxParams& params,
                                std::span<const double> g,
                                std::span<const double> anchor);

}  // namespace efg
