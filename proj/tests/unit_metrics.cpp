#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>

#include "efg/game.hpp"
#include "efg/lp_oracle.hpp"
#include "efg/metrics.hpp"
#include "efg/zoo.hpp"
#include "test_util.hpp"

using namespace efg;

namespace {

SequenceStrategy pure_second_column(const Game& g) {
  std::vector<std::vector<double>> probs(g.tp2.num_infosets());
  probs[0] = {0.0, 1.0, 0.0};
  return behavioral_to_sequence(g.tp2, probs);
}

}  // namespace

TEST_CASE("best response on the matrix game") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  SequenceStrategy y = pure_second_column(g);
  BestResponseResult br = best_response(g, 1, y.values);
  CHECK(br.value == doctest::Approx(0.5));
  CHECK(br.strategy.values[1] == doctest::Approx(1.0));  // row 1 beats 0.3, 0.2
}

TEST_CASE("best response dominates random strategies") {
  std::mt19937_64 rng(41);
  for (const char* name : {"kuhn", "goofspiel3"}) {
    Game g = compile_game(zoo::make_game({name, {}}));
    SequenceStrategy y = behavioral_to_sequence(
        g.tp2, testutil::random_behavioral(rng, g.tp2));
    BestResponseResult br = best_response(g, 1, y.values);
    for (int rep = 0; rep < 1000; ++rep) {
      SequenceStrategy x = behavioral_to_sequence(
          g.tp1, testutil::random_behavioral(rng, g.tp1));
      CHECK(g.payoff.bilinear(x.values, y.values) <= br.value + 1e-12);
    }
    // The responder's claimed value is achieved (tree-walk cross check).
    BehavioralStrategy bx = sequence_to_behavioral(g.tp1, br.strategy.values);
    BehavioralStrategy by = sequence_to_behavioral(g.tp2, y.values);
    CHECK(testutil::tree_walk_expectation(g, bx.probs, by.probs) ==
          doctest::Approx(br.value).epsilon(1e-12));
  }
}

TEST_CASE("kuhn best response equals the pure-strategy enumeration") {
  Game g = compile_game(zoo::gen_kuhn());
  SequenceStrategy y = uniform_strategy(g.tp2);
  BestResponseResult br = best_response(g, 1, y.values);

  // All 2^6 deterministic behavioral assignments of player 1.
  double best = -1e9;
  for (int mask = 0; mask < 64; ++mask) {
    std::vector<std::vector<double>> probs(6);
    for (int i = 0; i < 6; ++i) {
      probs[i] = {0.0, 0.0};
      probs[i][(mask >> i) & 1] = 1.0;
    }
    SequenceStrategy x = behavioral_to_sequence(g.tp1, probs);
    best = std::max(best, g.payoff.bilinear(x.values, y.values));
  }
  CHECK(br.value == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("nash gap basics") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  SequenceStrategy ux = uniform_strategy(g.tp1);
  SequenceStrategy uy = uniform_strategy(g.tp2);
  CHECK(nash_gap(g, ux.values, uy.values) == doctest::Approx(7.0 / 30.0).epsilon(1e-12));

  oracle::EquilibriumResult eq = oracle::lp_equilibrium(g);
  CHECK(nash_gap(g, eq.x.values, eq.y.values) <= 1e-9);

  // gap(x, BR(x)) stays non-negative.
  BestResponseResult br2 = best_response(g, 2, ux.values);
  CHECK(nash_gap(g, ux.values, br2.strategy.values) >= -1e-12);
}

TEST_CASE("one-sided gap computations agree with a joint tree walk on kuhn") {
  std::mt19937_64 rng(43);
  Game g = compile_game(zoo::gen_kuhn());
  for (int rep = 0; rep < 20; ++rep) {
    auto b1 = testutil::random_behavioral(rng, g.tp1);
    auto b2 = testutil::random_behavioral(rng, g.tp2);
    SequenceStrategy x = behavioral_to_sequence(g.tp1, b1);
    SequenceStrategy y = behavioral_to_sequence(g.tp2, b2);
    BestResponseResult br1 = best_response(g, 1, y.values);
    BestResponseResult br2 = best_response(g, 2, x.values);
    BehavioralStrategy brb1 = sequence_to_behavioral(g.tp1, br1.strategy.values);
    BehavioralStrategy brb2 = sequence_to_behavioral(g.tp2, br2.strategy.values);
    double max_side = testutil::tree_walk_expectation(g, brb1.probs, b2);
    double min_side = testutil::tree_walk_expectation(g, b1, brb2.probs);
    double joint = max_side - min_side;
    CHECK(std::abs(nash_gap(g, x.values, y.values) - joint) <= 1e-10);
  }
}

TEST_CASE("average infoset regret vanishes at the refined matrix equilibrium") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  auto perfect = oracle::matrix_perfect_equilibrium(zoo::paper_matrix());
  std::vector<double> x = {1.0, perfect.x[0], perfect.x[1], perfect.x[2]};
  std::vector<double> y = {1.0, perfect.y[0], perfect.y[1], perfect.y[2]};
  InfosetRegretReport rep = avg_infoset_regret(g, x, y);
  CHECK(rep.average <= 1e-6);
}

TEST_CASE("single-infoset game: average regret is the mean of the two sides") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  SequenceStrategy ux = uniform_strategy(g.tp1);
  SequenceStrategy uy = uniform_strategy(g.tp2);
  InfosetRegretReport rep = avg_infoset_regret(g, ux.values, uy.values);
  // With one infoset per player and the root belief, the two regrets are the
  // one-sided gaps, so the average is half the Nash gap.
  CHECK(rep.average ==
        doctest::Approx(0.5 * nash_gap(g, ux.values, uy.values)).epsilon(1e-12));
}

TEST_CASE("drps: careless equilibria keep zero gap but positive infoset regret") {
  Game g = compile_game(zoo::gen_drps());
  // Player 1 exits; player 2 gatekeeps with m2; both play the deep RPS badly.
  std::vector<std::vector<double>> b1(g.tp1.num_infosets());
  std::vector<std::vector<double>> b2(g.tp2.num_infosets());
  for (int i = 0; i < 3; ++i) {
    b1[i] = {0.0, 0.0, 0.0};
    b2[i] = {0.0, 0.0, 0.0};
  }
  b1[0][0] = 1.0;  // exit now
  b1[1][1] = 1.0;
  b1[2][0] = 1.0;  // always rock
  b2[0][1] = 1.0;  // block with m2
  b2[1][1] = 1.0;
  b2[2][0] = 1.0;  // always rock
  SequenceStrategy x = behavioral_to_sequence(g.tp1, b1);
  SequenceStrategy y = behavioral_to_sequence(g.tp2, b2);

  CHECK(nash_gap(g, x.values, y.values) <= 1e-12);
  InfosetRegretReport rep = avg_infoset_regret(g, x.values, y.values);
  CHECK(rep.average >= 0.01);
  // The deep infosets are unreached: the uniform-belief fallback kicks in.
  bool any_fallback = false;
  for (bool f : rep.zero_reach_fallback) any_fallback |= f;
  CHECK(any_fallback);
}

TEST_CASE("regret entries are clamped non-negative") {
  std::mt19937_64 rng(47);
  Game g = compile_game(zoo::gen_kuhn());
  for (int rep = 0; rep < 50; ++rep) {
    SequenceStrategy x = behavioral_to_sequence(
        g.tp1, testutil::random_behavioral(rng, g.tp1));
    SequenceStrategy y = behavioral_to_sequence(
        g.tp2, testutil::random_behavioral(rng, g.tp2));
    InfosetRegretReport rep2 = avg_infoset_regret(g, x.values, y.values);
    for (double r : rep2.regret) CHECK(r >= 0.0);
  }
}

TEST_CASE("zero average infoset regret implies equilibrium on zoo oracles") {
  for (const char* name : {"kuhn", "goofspiel3"}) {
    Game g = compile_game(zoo::make_game({name, {}}));
    oracle::EquilibriumResult eq = oracle::lp_equilibrium(g);
    InfosetRegretReport rep = avg_infoset_regret(g, eq.x.values, eq.y.values);
    if (rep.average <= 1e-10) CHECK(nash_gap(g, eq.x.values, eq.y.values) <= 1e-6);
  }
}

TEST_CASE("infoset regret matches a brute-force subtree enumeration on drps") {
  // Independent oracle: for every infoset, recompute the belief from chance
  // and opponent realization, then best-respond by enumerating all pure
  // behavioral assignments over the responder's subtree infosets, evaluating
  // each by a plain tree walk.
  std::mt19937_64 rng(59);
  Game g = compile_game(zoo::gen_drps());
  for (int rep = 0; rep < 25; ++rep) {
    auto b1 = testutil::random_behavioral(rng, g.tp1);
    auto b2 = testutil::random_behavioral(rng, g.tp2);
    SequenceStrategy x = behavioral_to_sequence(g.tp1, b1);
    SequenceStrategy y = behavioral_to_sequence(g.tp2, b2);
    InfosetRegretReport rep2 = avg_infoset_regret(g, x.values, y.values);

    for (int player : {1, 2}) {
      const Treeplex& tp = g.treeplex(player);
      const auto& own = player == 1 ? b1 : b2;
      const auto& opp = player == 1 ? b2 : b1;
      std::span<const double> opp_seq = player == 1 ? y.values : x.values;

      for (int local = 0; local < tp.num_infosets(); ++local) {
        int infoset = tp.infoset_ids[local];
        // Collect the infoset's nodes and the Bayes belief.
        std::vector<NodeId> members;
        for (NodeId id = 0; id < static_cast<NodeId>(g.tree.nodes.size()); ++id)
          if (const auto* d = g.tree.decision(id))
            if (d->infoset == infoset) members.push_back(id);
        std::vector<double> belief(members.size());
        double z = 0.0;
        for (std::size_t i = 0; i < members.size(); ++i) {
          int os = player == 1 ? g.seq2[members[i]] : g.seq1[members[i]];
          belief[i] = g.chance_reach[members[i]] * opp_seq[os];
          z += belief[i];
        }
        if (z > 0.0)
          for (double& v : belief) v /= z;
        else
          std::fill(belief.begin(), belief.end(), 1.0 / members.size());

        // Subtree infosets of this player, in treeplex order.
        std::vector<int> subtree;
        std::vector<char> member(tp.num_infosets(), 0);
        member[local] = 1;
        subtree.push_back(local);
        for (int j = local + 1; j < tp.num_infosets(); ++j) {
          int parent = tp.parent_seq[j];
          if (parent != 0 && member[tp.infoset_of_seq[parent]]) {
            member[j] = 1;
            subtree.push_back(j);
          }
        }

        auto value_from = [&](const std::vector<std::vector<double>>& dev) {
          std::function<double(NodeId)> walk = [&](NodeId id) -> double {
            if (const auto* t = g.tree.terminal(id))
              return player == 1 ? t->payoff : -t->payoff;
            if (const auto* c = g.tree.chance(id)) {
              double acc = 0.0;
              for (std::size_t i = 0; i < c->children.size(); ++i)
                acc += c->probs[i] * walk(c->children[i]);
              return acc;
            }
            const auto* d = g.tree.decision(id);
            const Treeplex& dtp = g.treeplex(d->player);
            int dl = dtp.local_of_infoset[d->infoset];
            const auto& probs = d->player == player
                                    ? (member[dl] ? dev[dl] : own[dl])
                                    : opp[dl];
            double acc = 0.0;
            for (std::size_t a = 0; a < d->children.size(); ++a)
              acc += probs[a] * walk(d->children[a]);
            return acc;
          };
          double acc = 0.0;
          for (std::size_t i = 0; i < members.size(); ++i)
            acc += belief[i] * walk(members[i]);
          return acc;
        };

        // Current value, then the best pure deviation over the subtree.
        std::vector<std::vector<double>> dev(tp.num_infosets());
        for (int j : subtree) dev[j] = own[j];
        double v_cur = value_from(dev);
        double v_br = -1e300;
        long long combos = 1;
        for (int j : subtree) combos *= tp.num_actions[j];
        for (long long pick = 0; pick < combos; ++pick) {
          long long rest = pick;
          for (int j : subtree) {
            dev[j].assign(tp.num_actions[j], 0.0);
            dev[j][rest % tp.num_actions[j]] = 1.0;
            rest /= tp.num_actions[j];
          }
          v_br = std::max(v_br, value_from(dev));
        }
        double expected = std::max(0.0, v_br - v_cur);
        CHECK(rep2.regret[infoset] == doctest::Approx(expected).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("l2 distance") {
  Game g = compile_game(zoo::gen_matrix(zoo::paper_matrix()));
  SequenceStrategy ux = uniform_strategy(g.tp1);
  SequenceStrategy uy = uniform_strategy(g.tp2);
  CHECK(l2_distance(ux.values, uy.values, ux.values, uy.values) == 0.0);

  auto perfect = oracle::matrix_perfect_equilibrium(zoo::paper_matrix());
  std::vector<double> x = {1.0, perfect.x[0], perfect.x[1], perfect.x[2]};
  std::vector<double> y = {1.0, perfect.y[0], perfect.y[1], perfect.y[2]};
  CHECK(l2_distance(ux.values, uy.values, x, y) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  std::vector<double> short_ref = {1.0};
  CHECK_THROWS_AS(l2_distance(ux.values, uy.values, short_ref, y),
                  std::invalid_argument);

  std::mt19937_64 rng(53);
  for (int rep = 0; rep < 100; ++rep) {
    auto a1 = behavioral_to_sequence(g.tp1, testutil::random_behavioral(rng, g.tp1));
    auto a2 = behavioral_to_sequence(g.tp2, testutil::random_behavioral(rng, g.tp2));
    auto b1 = behavioral_to_sequence(g.tp1, testutil::random_behavioral(rng, g.tp1));
    auto b2 = behavioral_to_sequence(g.tp2, testutil::random_behavioral(rng, g.tp2));
    auto c1 = behavioral_to_sequence(g.tp1, testutil::random_behavioral(rng, g.tp1));
    auto c2 = behavioral_to_sequence(g.tp2, testutil::random_behavioral(rng, g.tp2));
    double ab = l2_distance(a1.values, a2.values, b1.values, b2.values);
    double bc = l2_distance(b1.values, b2.values, c1.values, c2.values);
    double ac = l2_distance(a1.values, a2.values, c1.values, c2.values);
    CHECK(ac <= ab + bc + 1e-12);
  }
}
