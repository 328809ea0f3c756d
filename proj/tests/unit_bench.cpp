#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "efg/bench.hpp"
#include "efg/metrics.hpp"

using namespace efg;
using namespace efg::bench;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("run config parsing") {
  RunConfig cfg = parse_run_config(
      "# comment\n"
      "game = leduc\n"
      "game.ranks = 3\n"
      "algorithm = oomd_eps\n"
      "eps_fixed = 0.01\n"
      "iterations = 100\n"
      "cadence = 10\n"
      "wall_clock = false\n");
  CHECK(cfg.game.name == "leduc");
  CHECK(cfg.game.params.at("ranks") == "3");
  CHECK(cfg.algorithm == Algorithm::oomd_eps);
  CHECK(cfg.eps_fixed == 0.01);
  CHECK(cfg.iterations == 100);
  CHECK(!cfg.wall_clock);

  CHECK_THROWS_AS(parse_run_config("algorithm = cfr\niterations = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("game = kuhn\niterations = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("game = kuhn\nalgorithm = dqn\niterations = 5\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_run_config("game = kuhn\nalgorithm = cfr\n"), ConfigError);
  CHECK_THROWS_AS(
      parse_run_config("game = kuhn\nalgorithm = cfr\niterations = 5\nfoo = 1\n"),
      ConfigError);
}

TEST_CASE("unknown game is rejected before any compute") {
  RunConfig cfg = parse_run_config(
      "game = solitaire\nalgorithm = cfr\niterations = 5\n");
  CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("run emits the pinned CSV header and monotone iterations") {
  RunConfig cfg = parse_run_config(
      "game = kuhn\nalgorithm = efpe\niterations = 2000\ncadence = 100\n"
      "wall_clock = false\n");
  RunOutcome out = run(cfg);
  std::istringstream csv(out.csv);
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "iter,phase,lambda,epsilon,nash_gap,avg_infoset_regret,l2_ref,elapsed_s");
  std::string line;
  long long prev = -1;
  int rows = 0;
  while (std::getline(csv, line)) {
    long long iter = std::stoll(line.substr(0, line.find(',')));
    CHECK(iter > prev);
    prev = iter;
    ++rows;
  }
  CHECK(rows >= 20);
  CHECK(std::isfinite(out.final_nash_gap));
  CHECK(std::isfinite(out.final_avg_infoset_regret));
}

TEST_CASE("identical configs produce byte-identical CSV artifacts") {
  RunConfig cfg = parse_run_config(
      "game = drps\nalgorithm = efpe\niterations = 3000\ncadence = 250\n"
      "wall_clock = false\n");
  RunOutcome a = run(cfg);
  RunOutcome b = run(cfg);
  CHECK(a.csv == b.csv);
}

TEST_CASE("cfr run on the matrix game hits the LP value") {
  RunConfig cfg = parse_run_config(
      "game = matrix\nalgorithm = cfr\niterations = 10000\nwall_clock = false\n");
  RunOutcome out = run(cfg);
  CHECK(out.final_nash_gap <= 0.01);
}

TEST_CASE("reference files round trip and gate dimensions") {
  SequenceStrategy x{1, {1.0, 0.25, 0.75}};
  SequenceStrategy y{2, {1.0, 0.5, 0.5}};
  std::string text = format_reference(0.125, x, y);
  ReferenceProfile ref = parse_reference(text);
  CHECK(ref.x == x.values);
  CHECK(ref.y == y.values);
  CHECK_THROWS_AS(parse_reference("value 0\n"), ConfigError);

  std::string path = temp_path("efg_ref_mismatch.txt");
  write_file(path, text);
  RunConfig cfg = parse_run_config(
      "game = kuhn\nalgorithm = cfr\niterations = 10\nreference = " + path + "\n");
  CHECK_THROWS_AS(run(cfg), ConfigError);
}

TEST_CASE("dump_strategies: every recorded row passes the strategy invariants") {
  std::string path = temp_path("efg_dump.txt");
  RunConfig cfg = parse_run_config(
      "game = kuhn\nalgorithm = efpe\niterations = 2000\ncadence = 100\n"
      "wall_clock = false\ndump_strategies = " + path + "\n");
  RunOutcome out = run(cfg);
  Game g = compile_game(zoo::make_game(cfg.game));
  int rows = 0;
  for (const TraceRecord& r : out.trace.records) {
    REQUIRE(!r.x.empty());
    CHECK(flow_violation(g.tp1, r.x) <= 1e-9);
    CHECK(flow_violation(g.tp2, r.y) <= 1e-9);
    CHECK(validate_perturbed(g.tp1, r.x, r.eps));
    CHECK(validate_perturbed(g.tp2, r.y, r.eps));
    ++rows;
  }
  CHECK(rows >= 20);
  std::ifstream check(path);
  CHECK(check.good());
}

TEST_CASE("compare validation") {
  RunConfig a = parse_run_config(
      "game = kuhn\nalgorithm = cfr\niterations = 50\nwall_clock = false\n");
  CHECK_THROWS_AS(compare({a}), ConfigError);
  RunConfig b = a;
  b.game.name = "drps";
  CHECK_THROWS_AS(compare({a, b}), ConfigError);
}

TEST_CASE("compare merges runs and reports orderings") {
  RunConfig a = parse_run_config(
      "game = kuhn\nalgorithm = cfr\niterations = 2000\ncadence = 500\n"
      "wall_clock = false\nlabel = cfr\n");
  RunConfig b = parse_run_config(
      "game = kuhn\nalgorithm = efpe\niterations = 2000\ncadence = 500\n"
      "wall_clock = false\nlabel = efpe\n");
  CompareOutcome out = compare({a, b});
  CHECK(out.runs.size() == 2);
  CHECK(out.merged_csv.find("algorithm,iter,") == 0);
  CHECK(out.merged_csv.find("\ncfr,") != std::string::npos);
  CHECK(out.merged_csv.find("\nefpe,") != std::string::npos);
  CHECK(out.summary_json.find("\"schema_version\": 1") != std::string::npos);
  CHECK(out.summary_json.find("lowest_final_avg_infoset_regret") !=
        std::string::npos);
}
