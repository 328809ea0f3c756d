#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "efg/cfr.hpp"
#include "efg/game.hpp"
#include "efg/lp_oracle.hpp"
#include "efg/metrics.hpp"
#include "efg/solver.hpp"
#include "efg/zoo.hpp"
#include "test_util.hpp"

using namespace efg;

TEST_CASE("make_schedule validates its parameters") {
  CHECK_THROWS_AS(make_schedule(1.0, 2.0, 0.1, 0.9999, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_schedule(1.001, 2.0, 0.1, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_schedule(1.001, 2.0, 0.1, 1.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_schedule(1.001, -1.0, 0.1, 0.9, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_schedule(1.001, 2.0, 0.6, 0.9, 2.0), std::invalid_argument);
  Schedule s = make_schedule(1.001, 2.0, 0.1, 0.9999, 2.0);
  CHECK(s.rounds(1) == 2);  // ceil(1.001)
  // Strict regularization inequality 1/lambda_k < eps_k^d at every phase.
  for (int k = 1; k < 50; ++k) {
    CHECK(1.0 / s.lambda(k) < std::pow(s.eps(k), s.d));
    CHECK(s.eps(k) == doctest::Approx(0.1 * std::pow(0.9999, k)));
  }
}

TEST_CASE("theorem mode report on kuhn with the experimental step size") {
  Game g = compile_game(zoo::gen_kuhn());
  Schedule s = make_schedule(1.001, 2.0, g.min_eps_bound, 0.9999, 2.0, true);
  TheoremModeReport rep = check_theorem_mode(s, g);
  // eta = 2 violates eta <= 1/(sqrt 2 ||U||) whenever ||U|| > 1/(2 sqrt 2).
  if (rep.operator_norm > 1.0 / (2.0 * std::sqrt(2.0))) {
    CHECK(!rep.eta_ok);
  } else {
    CHECK(rep.eta_ok);
  }
  // lambda_1 ~ 16 with eps0 = 1/4 already exceeds the window's upper edge.
  CHECK(rep.first_window_violation == 1);
  CHECK(rep.heuristic);
}

TEST_CASE("solve_phase with zero rounds returns the initial point") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  PerturbedDgf d1(g.tp1, 0.01), d2(g.tp2, 0.01);
  PhaseIterate init = uniform_iterate(g);
  PhaseIterate out = solve_phase(g, d1, d2, 10.0, 0.3, 0, init);
  CHECK(out.x.values == init.x.values);
  CHECK(out.y.values == init.y.values);
}

TEST_CASE("solve_phase iterates stay eps-feasible") {
  Game g = compile_game(zoo::gen_kuhn());
  const double eps = 0.02;
  PerturbedDgf d1(g.tp1, eps), d2(g.tp2, eps);
  int checked = 0;
  auto hook = [&](std::int64_t, const PhaseIterate& z) {
    CHECK(validate_perturbed(g.tp1, z.x.values, eps));
    CHECK(validate_perturbed(g.tp2, z.y.values, eps));
    CHECK(flow_violation(g.tp1, z.x.values) <= 1e-9);
    CHECK(flow_violation(g.tp2, z.y.values) <= 1e-9);
    ++checked;
    return true;
  };
  solve_phase(g, d1, d2, 25.0, 0.3, 300, uniform_iterate(g), hook);
  CHECK(checked == 300);
}

TEST_CASE("last iterate converges linearly to the regularized equilibrium") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  const double lambda = 10.0, eps = 0.01, eta = 0.3;
  PerturbedDgf d1(g.tp1, eps), d2(g.tp2, eps);
  auto fp = testutil::regularized_equilibrium(g, d1, d2, lambda);
  REQUIRE(fp.residual <= 1e-13);

  const double rate = lambda / (lambda + eta);
  std::vector<double> dist(601);
  PhaseIterate z = uniform_iterate(g);
  for (int t = 1; t <= 600; ++t) {
    z = solve_phase(g, d1, d2, lambda, eta, 1, std::move(z));
    dist[t] = testutil::profile_distance(z.x.values, z.y.values, fp.x.values,
                                         fp.y.values);
  }
  double c = 0.0;
  for (int t = 50; t <= 400; ++t) c = std::max(c, dist[t] / std::pow(rate, t / 2.0));
  int violations = 0;
  for (int t = 50; t <= 600; ++t)
    if (dist[t] > c * std::pow(rate, t / 2.0) * (1.0 + 1e-9)) ++violations;
  CHECK(violations * 100 <= 5 * 551);
  CHECK(dist[600] <= 1e-3);
}

TEST_CASE("bregman potential is monotone under the step-size condition") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  const double lambda = 10.0, eps = 0.01, eta = 0.3;
  PerturbedDgf d1(g.tp1, eps), d2(g.tp2, eps);
  auto fp = testutil::regularized_equilibrium(g, d1, d2, lambda);
  REQUIRE(fp.residual <= 1e-13);

  PhaseIterate prev = uniform_iterate(g);
  double last_potential = std::numeric_limits<double>::infinity();
  for (int t = 1; t <= 300; ++t) {
    PhaseIterate next = solve_phase(g, d1, d2, lambda, eta, 1, prev);
    double potential =
        d1.bregman(fp.x.values, next.x_half.values) +
        d2.bregman(fp.y.values, next.y_half.values) +
        d1.bregman(next.x_half.values, prev.x.values) +
        d2.bregman(next.y_half.values, prev.y.values);
    CHECK(potential <= last_potential + 1e-12);
    last_potential = potential;
    prev = std::move(next);
  }
}

TEST_CASE("compute_efpe budget handling and feasibility") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  Schedule s = paper_schedule(g, 1000);

  Budget zero;
  zero.max_iterations = 0;
  SolveResult r0 = compute_efpe(g, s, zero);
  CHECK(r0.iterations == 0);
  CHECK(r0.trace.records.size() == 1);
  CHECK(r0.trace.records[0].iteration == 0);

  // An eps0 beyond the feasibility bound is rejected before running.
  Schedule bad = s;
  bad.eps0 = 0.4;
  Budget b;
  b.max_iterations = 10;
  CHECK_THROWS_AS(compute_efpe(g, bad, b), std::invalid_argument);
}

TEST_CASE("compute_efpe is deterministic") {
  Game g = compile_game(zoo::gen_kuhn());
  Schedule s = paper_schedule(g, 2000);
  Budget b;
  b.max_iterations = 2000;
  RecordOptions rec;
  rec.every = 200;
  SolveResult r1 = compute_efpe(g, s, b, rec);
  SolveResult r2 = compute_efpe(g, s, b, rec);
  REQUIRE(r1.trace.records.size() == r2.trace.records.size());
  for (std::size_t i = 0; i < r1.trace.records.size(); ++i) {
    CHECK(r1.trace.records[i].nash_gap == r2.trace.records[i].nash_gap);
    CHECK(r1.trace.records[i].avg_infoset_regret ==
          r2.trace.records[i].avg_infoset_regret);
  }
  CHECK(r1.x.values == r2.x.values);
  CHECK(r1.y.values == r2.y.values);
  CHECK(r1.trace.feasibility_violations == 0);
}

TEST_CASE("compute_efpe tracks the refined matrix equilibrium") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  auto perfect = oracle::matrix_perfect_equilibrium(zoo::paper_matrix());
  std::vector<double> xr = {1.0, perfect.x[0], perfect.x[1], perfect.x[2]};
  std::vector<double> yr = {1.0, perfect.y[0], perfect.y[1], perfect.y[2]};

  Budget b;
  b.max_iterations = 200000;
  SolveResult r = compute_efpe(g, paper_schedule(g, b.max_iterations), b);
  double dist =
      testutil::profile_distance(r.x.values, r.y.values, xr, yr);
  CHECK(dist <= 2e-3);
  CHECK(r.trace.feasibility_violations == 0);
}

TEST_CASE("cfr closes the gap on the matrix game") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  CfrResult r = cfr(g, 10000);
  CHECK(nash_gap(g, r.avg_x.values, r.avg_y.values) <= 0.01);
  double value = g.payoff.bilinear(r.avg_x.values, r.avg_y.values);
  CHECK(value == doctest::Approx(13.0 / 30.0).epsilon(0.02));
  CHECK(flow_violation(g.tp1, r.avg_x.values) <= 1e-9);
  CHECK(flow_violation(g.tp2, r.avg_y.values) <= 1e-9);
}

TEST_CASE("cfr closes the gap on kuhn") {
  Game g = compile_game(zoo::gen_kuhn());
  CfrResult r = cfr(g, 100000);
  CHECK(nash_gap(g, r.avg_x.values, r.avg_y.values) <= 1e-3);
  double value = g.payoff.bilinear(r.avg_x.values, r.avg_y.values);
  CHECK(value == doctest::Approx(-1.0 / 36.0).epsilon(0.05));
}

TEST_CASE("oomd baseline closes the gap without perturbation") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  SolveResult r = oomd_baseline(g, 0.0, stable_eta(g), 50000);
  CHECK(nash_gap(g, r.x.values, r.y.values) <= 1e-6);
}

TEST_CASE("fixed-eps baselines plateau and order by eps") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  auto perfect = oracle::matrix_perfect_equilibrium(zoo::paper_matrix());
  std::vector<double> xr = {1.0, perfect.x[0], perfect.x[1], perfect.x[2]};
  std::vector<double> yr = {1.0, perfect.y[0], perfect.y[1], perfect.y[2]};
  double eta = stable_eta(g);

  SolveResult large = oomd_baseline(g, 0.01, eta, 60000);
  SolveResult small = oomd_baseline(g, 0.001, eta, 60000);
  double dist_large =
      testutil::profile_distance(large.x.values, large.y.values, xr, yr);
  double dist_small =
      testutil::profile_distance(small.x.values, small.y.values, xr, yr);
  CHECK(dist_small < dist_large);
  CHECK(dist_large == doctest::Approx(0.018856).epsilon(0.05));

  // The perturbation floor keeps the baseline away from exact refinement.
  SolveResult half = oomd_baseline(g, 0.01, eta, 30000);
  double dist_half =
      testutil::profile_distance(half.x.values, half.y.values, xr, yr);
  CHECK(std::abs(dist_half - dist_large) <= 1e-6);  // already flat
}

TEST_CASE("prox stays finite and feasible at extreme schedule tails") {
  // Late phases drive lambda toward 1e80 and eps toward 1e-40; the prox must
  // keep producing feasible interior flows.
  Game g = compile_game(zoo::gen_kuhn());
  const double eps = 1e-40;
  PerturbedDgf d1(g.tp1, eps), d2(g.tp2, eps);
  PhaseIterate z = uniform_iterate(g);
  z = solve_phase(g, d1, d2, 1e80, 0.5, 50, std::move(z));
  for (double v : z.x.values) CHECK(std::isfinite(v));
  for (double v : z.y.values) CHECK(std::isfinite(v));
  CHECK(flow_violation(g.tp1, z.x.values) <= 1e-9);
  CHECK(flow_violation(g.tp2, z.y.values) <= 1e-9);
  CHECK(validate_perturbed(g.tp1, z.x.values, eps));
  CHECK(validate_perturbed(g.tp2, z.y.values, eps));
}

TEST_CASE("cfr approaches the symmetric value of goofspiel") {
  Game g = compile_game(zoo::gen_goofspiel3());
  CfrResult r = cfr(g, 10000);
  CHECK(std::abs(g.payoff.bilinear(r.avg_x.values, r.avg_y.values)) <= 0.01);
  CHECK(nash_gap(g, r.avg_x.values, r.avg_y.values) <= 0.05);
}

TEST_CASE("kuhn fixed-eps baseline cannot reach zero infoset regret") {
  Game g = compile_game(zoo::gen_kuhn());
  SolveResult r = oomd_baseline(g, 0.01, stable_eta(g), 30000);
  InfosetRegretReport rep = avg_infoset_regret(g, r.x.values, r.y.values);
  CHECK(rep.average >= 1e-4);
  SolveResult r2 = oomd_baseline(g, 0.01, stable_eta(g), 60000);
  InfosetRegretReport rep2 = avg_infoset_regret(g, r2.x.values, r2.y.values);
  CHECK(std::abs(rep2.average - rep.average) <= 0.2 * rep.average);  // plateau
}
