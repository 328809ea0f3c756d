#include "efg/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "efg/metrics.hpp"

#include "json.hpp"

namespace efg::bench {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::efpe: return "efpe";
    case Algorithm::cfr: return "cfr";
    case Algorithm::oomd: return "oomd";
    case Algorithm::oomd_eps: return "oomd_eps";
  }
  return "unknown";
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  bool saw_algorithm = false;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    auto as_double = [&](const std::string& v) {
      try {
        return std::stod(v);
      } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': bad number '" + v + "'");
      }
    };
    auto as_int = [&](const std::string& v) {
      try {
        return static_cast<std::int64_t>(std::stoll(v));
      } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': bad integer '" + v + "'");
      }
    };
    auto as_bool = [&](const std::string& v) {
      if (v == "true" || v == "1" || v == "yes") return true;
      if (v == "false" || v == "0" || v == "no") return false;
      throw ConfigError("config field '" + key + "': bad boolean '" + v + "'");
    };

    if (key == "game") cfg.game.name = value;
    else if (key.rfind("game.", 0) == 0) cfg.game.params[key.substr(5)] = value;
    else if (key == "algorithm") {
      saw_algorithm = true;
      if (value == "efpe") cfg.algorithm = Algorithm::efpe;
      else if (value == "cfr") cfg.algorithm = Algorithm::cfr;
      else if (value == "oomd") cfg.algorithm = Algorithm::oomd;
      else if (value == "oomd_eps") cfg.algorithm = Algorithm::oomd_eps;
      else throw ConfigError("unknown algorithm '" + value + "'");
    } else if (key == "label") cfg.label = value;
    else if (key == "beta") cfg.beta = as_double(value);
    else if (key == "eta") cfg.eta = as_double(value);
    else if (key == "eps0") cfg.eps0 = value == "auto" ? 0.0 : as_double(value);
    else if (key == "rho") cfg.rho = as_double(value);
    else if (key == "d") cfg.d = as_double(value);
    else if (key == "theorem_mode") cfg.theorem_mode = as_bool(value);
    else if (key == "eps_fixed") cfg.eps_fixed = as_double(value);
    else if (key == "iterations") cfg.iterations = as_int(value);
    else if (key == "seconds") cfg.seconds = as_double(value);
    else if (key == "cadence") cfg.cadence = as_int(value);
    else if (key == "cadence_geometric") cfg.cadence_geometric = as_double(value);
    else if (key == "wall_clock") cfg.wall_clock = as_bool(value);
    else if (key == "out") cfg.out = value;
    else if (key == "reference") cfg.reference = value;
    else if (key == "dump_strategies") cfg.dump_strategies = value;
    else throw ConfigError("unknown config field '" + key + "'");
  }
  if (cfg.game.name.empty()) throw ConfigError("config is missing 'game'");
  if (!saw_algorithm) throw ConfigError("config is missing 'algorithm'");
  if (cfg.iterations <= 0 && !(cfg.seconds < std::numeric_limits<double>::infinity()))
    throw ConfigError("config needs a positive iteration or seconds budget");
  if (cfg.iterations < 0) throw ConfigError("iterations must be non-negative");
  if (cfg.label.empty()) cfg.label = algorithm_name(cfg.algorithm);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(read_file(path));
}

std::string trace_to_csv(const Trace& trace, bool wall_clock) {
  std::ostringstream os;
  os << "iter,phase,lambda,epsilon,nash_gap,avg_infoset_regret,l2_ref,elapsed_s\n";
  for (const TraceRecord& r : trace.records) {
    os << r.iteration << ',' << r.phase << ',' << fmt17(r.lambda) << ','
       << fmt17(r.eps) << ',' << fmt17(r.nash_gap) << ','
       << fmt17(r.avg_infoset_regret) << ',';
    if (!std::isnan(r.l2_ref)) os << fmt17(r.l2_ref);
    os << ',' << fmt17(wall_clock ? r.elapsed_s : 0.0) << "\n";
  }
  return os.str();
}

std::string format_reference(double value, const SequenceStrategy& x,
                             const SequenceStrategy& y) {
  std::ostringstream os;
  os << "# reference equilibrium\n";
  os << "value " << fmt17(value) << "\n";
  os << "x";
  for (double v : x.values) os << ' ' << fmt17(v);
  os << "\ny";
  for (double v : y.values) os << ' ' << fmt17(v);
  os << "\n";
  return os.str();
}

ReferenceProfile parse_reference(const std::string& text) {
  ReferenceProfile ref;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ls(t);
    std::string head;
    ls >> head;
    if (head == "value") continue;
    std::vector<double>* target = head == "x"   ? &ref.x
                                  : head == "y" ? &ref.y
                                                : nullptr;
    if (target == nullptr)
      throw ConfigError("reference file: unknown line '" + head + "'");
    double v;
    while (ls >> v) target->push_back(v);
  }
  if (ref.x.empty() || ref.y.empty())
    throw ConfigError("reference file: missing x or y vector");
  return ref;
}

namespace {

struct StrategyDump {
  std::ostringstream os;
  void add(std::int64_t iter, std::span<const double> x, std::span<const double> y) {
    os << "iter " << iter << "\nx";
    for (double v : x) os << ' ' << fmt17(v);
    os << "\ny";
    for (double v : y) os << ' ' << fmt17(v);
    os << "\n";
  }
};

}  // namespace

RunOutcome run(const RunConfig& config) {
  Game game = [&] {
    try {
      return compile_game(zoo::make_game(config.game));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();

  RecordOptions rec;
  rec.every = config.cadence;
  rec.geometric = config.cadence_geometric;
  rec.keep_strategies = !config.dump_strategies.empty();
  if (config.cadence == 0 && config.cadence_geometric == 0.0) rec.final_only = true;
  if (!config.reference.empty()) {
    ReferenceProfile ref = parse_reference(read_file(config.reference));
    if (static_cast<int>(ref.x.size()) != game.tp1.num_sequences ||
        static_cast<int>(ref.y.size()) != game.tp2.num_sequences)
      throw ConfigError("reference file dimensions do not match the game");
    rec.reference = std::move(ref);
  }

  Budget budget;
  if (config.iterations > 0) budget.max_iterations = config.iterations;
  budget.max_seconds = config.seconds;

  RunOutcome out;
  double eta = config.eta > 0.0 ? config.eta : stable_eta(game);
  switch (config.algorithm) {
    case Algorithm::efpe: {
      Schedule preset = paper_schedule(game, config.iterations);
      Schedule s = make_schedule(config.beta,
                                 eta,
                                 config.eps0 > 0.0 ? config.eps0 : preset.eps0,
                                 config.rho > 0.0 ? config.rho : preset.rho,
                                 config.d, config.theorem_mode);
      SolveResult r = compute_efpe(game, s, budget, rec);
      out.trace = std::move(r.trace);
      out.x = std::move(r.x);
      out.y = std::move(r.y);
      break;
    }
    case Algorithm::cfr: {
      if (config.iterations <= 0) throw ConfigError("cfr needs an iteration budget");
      CfrResult r = cfr(game, config.iterations, rec);
      out.trace = std::move(r.trace);
      out.x = std::move(r.avg_x);
      out.y = std::move(r.avg_y);
      break;
    }
    case Algorithm::oomd:
    case Algorithm::oomd_eps: {
      if (config.iterations <= 0) throw ConfigError("oomd needs an iteration budget");
      double eps = config.algorithm == Algorithm::oomd ? 0.0 : config.eps_fixed;
      SolveResult r = oomd_baseline(game, eps, eta, config.iterations, rec);
      out.trace = std::move(r.trace);
      out.x = std::move(r.x);
      out.y = std::move(r.y);
      break;
    }
  }

  if (!out.trace.records.empty()) {
    const TraceRecord& last = out.trace.records.back();
    out.final_nash_gap = last.nash_gap;
    out.final_avg_infoset_regret = last.avg_infoset_regret;
    out.final_l2_ref = last.l2_ref;
  }
  out.csv = trace_to_csv(out.trace, config.wall_clock);
  if (!config.out.empty()) write_file(config.out, out.csv);
  if (!config.dump_strategies.empty()) {
    // One block per CSV row, plus the final strategies if no row carried them.
    StrategyDump dump;
    bool any = false;
    for (const TraceRecord& r : out.trace.records) {
      if (r.x.empty()) continue;
      dump.add(r.iteration, r.x, r.y);
      any = true;
    }
    if (!any)
      dump.add(out.trace.records.empty() ? 0 : out.trace.records.back().iteration,
               out.x.values, out.y.values);
    write_file(config.dump_strategies, dump.os.str());
  }
  return out;
}

CompareOutcome compare(const std::vector<RunConfig>& configs) {
  if (configs.size() < 2)
    throw ConfigError("compare needs at least two configurations");
  for (std::size_t i = 1; i < configs.size(); ++i) {
    if (configs[i].game.name != configs[0].game.name ||
        configs[i].game.params != configs[0].game.params)
      throw ConfigError("compare: all configurations must use the same game");
  }

  CompareOutcome out;
  std::ostringstream merged;
  merged << "algorithm,iter,phase,lambda,epsilon,nash_gap,avg_infoset_regret,"
            "l2_ref,elapsed_s\n";
  nlohmann::json summary;
  summary["schema_version"] = 1;
  summary["game"] = configs[0].game.name;
  summary["results"] = nlohmann::json::array();

  for (const RunConfig& cfg : configs) {
    RunOutcome r = run(cfg);
    std::istringstream csv(r.csv);
    std::string line;
    std::getline(csv, line);  // drop header
    while (std::getline(csv, line)) merged << cfg.label << ',' << line << "\n";
    nlohmann::json entry;
    entry["algorithm"] = algorithm_name(cfg.algorithm);
    entry["label"] = cfg.label;
    entry["final_nash_gap"] = r.final_nash_gap;
    entry["final_avg_infoset_regret"] = r.final_avg_infoset_regret;
    if (!std::isnan(r.final_l2_ref)) entry["final_l2_ref"] = r.final_l2_ref;
    summary["results"].push_back(entry);
    out.runs.push_back(std::move(r));
  }

  // Ordering report: which run ends lowest on each metric.
  auto best_label = [&](auto metric) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.runs.size(); ++i)
      if (metric(out.runs[i]) < metric(out.runs[best])) best = i;
    return configs[best].label;
  };
  summary["lowest_final_nash_gap"] =
      best_label([](const RunOutcome& r) { return r.final_nash_gap; });
  summary["lowest_final_avg_infoset_regret"] =
      best_label([](const RunOutcome& r) { return r.final_avg_infoset_regret; });

  out.merged_csv = merged.str();
  out.summary_json = summary.dump(2) + "\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace efg::bench
