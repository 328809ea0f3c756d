#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "efg/bench.hpp"
#include "efg/game_io.hpp"
#include "efg/lp_oracle.hpp"
#include "efg/metrics.hpp"

namespace {

efg::zoo::GameSpec spec_from_name(const std::string& name) {
  efg::zoo::GameSpec spec;
  spec.name = name;
  return spec;
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
  efg::bench::RunConfig cfg = efg::bench::load_run_config(config_path);
  if (!out_override.empty()) cfg.out = out_override;
  efg::bench::RunOutcome r = efg::bench::run(cfg);
  if (cfg.out.empty()) std::cout << r.csv;
  std::fprintf(stderr,
               "run %s on %s: final nash_gap=%.6g avg_infoset_regret=%.6g\n",
               efg::bench::algorithm_name(cfg.algorithm), cfg.game.name.c_str(),
               r.final_nash_gap, r.final_avg_infoset_regret);
  return 0;
}

int cmd_compare(const std::vector<std::string>& config_paths,
                const std::string& out_prefix) {
  std::vector<efg::bench::RunConfig> configs;
  for (const auto& p : config_paths)
    configs.push_back(efg::bench::load_run_config(p));
  efg::bench::CompareOutcome out = efg::bench::compare(configs);
  if (!out_prefix.empty()) {
    efg::bench::write_file(out_prefix + "_merged.csv", out.merged_csv);
    efg::bench::write_file(out_prefix + "_summary.json", out.summary_json);
    std::fprintf(stderr, "wrote %s_merged.csv and %s_summary.json\n",
                 out_prefix.c_str(), out_prefix.c_str());
  } else {
    std::cout << out.summary_json;
  }
  return 0;
}

int cmd_oracle(const std::string& game_name, const std::string& out_path) {
  efg::Game game = efg::compile_game(efg::zoo::make_game(spec_from_name(game_name)));
  efg::oracle::EquilibriumResult eq = efg::oracle::lp_equilibrium(game);
  if (game_name == "matrix") {
    // Dominance refinement isolates the perfect profile of the 3x3 game.
    auto perfect = efg::oracle::matrix_perfect_equilibrium(efg::zoo::paper_matrix());
    eq.value = perfect.value;
    for (int i = 0; i < 3; ++i) {
      eq.x.values[1 + i] = perfect.x[i];
      eq.y.values[1 + i] = perfect.y[i];
    }
    eq.gap = efg::nash_gap(game, eq.x.values, eq.y.values);
  }
  std::string text = efg::bench::format_reference(eq.value, eq.x, eq.y);
  if (out_path.empty()) std::cout << text;
  else efg::bench::write_file(out_path, text);
  std::fprintf(stderr, "oracle %s: value=%.12g certificate gap=%.3g\n",
               game_name.c_str(), eq.value, eq.gap);
  return 0;
}

int cmd_validate(const std::string& file) {
  efg::ParseResult parsed = efg::parse_game(efg::bench::read_file(file));
  if (!parsed.ok) {
    for (const auto& issue : parsed.issues)
      std::fprintf(stderr, "%s:%d: %s\n", file.c_str(), issue.line,
                   issue.message.c_str());
    return 1;
  }
  auto violations = efg::validate_game(parsed.tree);
  if (!violations.empty()) {
    for (const auto& v : violations)
      std::fprintf(stderr, "[%s] node %d: %s\n", efg::violation_kind_name(v.kind),
                   v.node, v.message.c_str());
    return 1;
  }
  efg::Game game = efg::compile_game(std::move(parsed.tree));
  efg::GameSizes s = efg::game_sizes(game);
  std::printf("%s: valid; infosets %d+%d, sequences %d+%d\n", file.c_str(),
              s.infosets1, s.infosets2, s.sequences1, s.sequences2);
  return 0;
}

int cmd_dump_sizes(const std::string& game_name) {
  std::vector<std::string> names;
  if (game_name == "all")
    names = {"kuhn", "leduc3", "leduc5", "goofspiel3", "drps", "matrix"};
  else
    names = {game_name};
  std::printf("# per-player counts; sequences_i = 1 + sum of action counts over\n"
              "# player i's infosets (the empty sequence counted once per player)\n");
  std::printf("%-12s %10s %10s %12s %12s\n", "game", "infosets1", "infosets2",
              "sequences1", "sequences2");
  for (const auto& n : names) {
    efg::Game game = efg::compile_game(efg::zoo::make_game(spec_from_name(n)));
    efg::GameSizes s = efg::game_sizes(game);
    std::printf("%-12s %10d %10d %12d %12d\n", n.c_str(), s.infosets1, s.infosets2,
                s.sequences1, s.sequences2);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extensive-form perfect equilibrium solver benchmark"};
  app.require_subcommand(1);

  std::string config_path, out_path, game_name = "all", file_path;
  std::vector<std::string> config_paths;

  CLI::App* run = app.add_subcommand("run", "execute one configured run");
  run->add_option("--config", config_path, "run configuration file")->required();
  run->add_option("--out", out_path, "override the CSV output path");

  CLI::App* cmp = app.add_subcommand("compare", "run several configs on one game");
  cmp->add_option("--config", config_paths, "configuration files")->required();
  cmp->add_option("--out", out_path, "output prefix for merged CSV and summary");

  CLI::App* orc = app.add_subcommand("oracle", "exact small-game equilibrium");
  orc->add_option("--game", game_name, "kuhn|goofspiel3|drps|matrix")
      ->required();
  orc->add_option("--out", out_path, "write the reference file here");

  CLI::App* val = app.add_subcommand("validate-game", "check a game file");
  val->add_option("--file", file_path, "game file in the text format")->required();

  CLI::App* sizes = app.add_subcommand("dump-sizes", "print game size table");
  sizes->add_option("--game", game_name, "game name or 'all'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_path);
    if (cmp->parsed()) return cmd_compare(config_paths, out_path);
    if (orc->parsed()) return cmd_oracle(game_name, out_path);
    if (val->parsed()) return cmd_validate(file_path);
    if (sizes->parsed()) return cmd_dump_sizes(game_name);
  } catch (const efg::bench::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 2;
  }
  return 0;
}
