#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "efg/cfr.hpp"
#include "efg/lp_oracle.hpp"
#include "efg/solver.hpp"
#include "efg/zoo.hpp"

namespace efg::bench {

// Raised for configuration problems (bad field, unknown game, missing
// parameter); the CLI maps it to exit code 1.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Algorithm { efpe, cfr, oomd, oomd_eps };

struct RunConfig {
  zoo::GameSpec game;
  Algorithm algorithm = Algorithm::efpe;
  std::string label;  // defaults to the algorithm name

  // efpe schedule; zero means "paper preset": eps0 <= 0 uses the game's
  // feasibility bound, rho <= 0 the budget-scaled annealing rate, eta <= 0
  // the stable step size for the game.
  double beta = 1.0 + 1e-9;
  double eta = 0.0;
  double eps0 = 0.0;
  double rho = 0.0;
  double d = 2.0;
  bool theorem_mode = false;

  double eps_fixed = 0.0;  // oomd_eps perturbation

  std::int64_t iterations = 0;
  double seconds = std::numeric_limits<double>::infinity();

  std::int64_t cadence = 0;       // record every N iterations
  double cadence_geometric = 0.0; // or when iter grows by this ratio
  bool wall_clock = true;         // false pins elapsed_s to 0 for byte-stable CSVs

  std::string out;                 // CSV path ("" = no file)
  std::string reference;           // optional reference-equilibrium file
  std::string dump_strategies;     // optional sidecar with per-record strategies
};

// Key-value text config: one `key = value` per line, '#' comments.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

const char* algorithm_name(Algorithm a);

struct RunOutcome {
  Trace trace;
  SequenceStrategy x, y;
  std::string csv;  // full CSV artifact, also written to config.out
  double final_nash_gap = 0.0;
  double final_avg_infoset_regret = 0.0;
  double final_l2_ref = std::numeric_limits<double>::quiet_NaN();
};

RunOutcome run(const RunConfig& config);

struct CompareOutcome {
  std::string merged_csv;   // long format with a leading algorithm column
  std::string summary_json; // schema_version, per-run finals, orderings
  std::vector<RunOutcome> runs;
};

// Runs every config on the same game and merges the artifacts; rejects
// fewer than two configs or mixed games.
CompareOutcome compare(const std::vector<RunConfig>& configs);

// Reference-equilibrium text format shared by `oracle` and `run`.
std::string format_reference(double value, const SequenceStrategy& x,
                             const SequenceStrategy& y);
ReferenceProfile parse_reference(const std::string& text);

std::string trace_to_csv(const Trace& trace, bool wall_clock);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace efg::bench
