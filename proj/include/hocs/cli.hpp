#pragma once

// The `hocs` command line: generate, run, compare and dump-graph.
//
// Commands write their files under --out, which defaults to $HOCS_OUTPUT_DIR
// and then to ./hocs_out. Exit codes: 0 success, 1 runtime failure,
// 2 usage error, 3 simulation invariant violated.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hocs/graph.hpp"
#include "hocs/report.hpp"
#include "hocs/scenario_gen.hpp"
#include "hocs/scenario_io.hpp"
#include "hocs/sim.hpp"

namespace hocs::cli {

inline constexpr const char* kOutputDirEnv = "HOCS_OUTPUT_DIR";

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "hocs_out";
}

inline double parse_number(std::string_view s, std::string_view what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(std::string(s), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError(std::string(what) + ": not a number: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t from = 0;
  for (;;) {
    const auto at = s.find(sep, from);
    out.emplace_back(s.substr(from, at == std::string_view::npos ? std::string_view::npos : at - from));
    if (at == std::string_view::npos) break;
    from = at + 1;
  }
  return out;
}

/// "30x30" -> (30, 30).
inline std::pair<double, double> parse_area(std::string_view s) {
  const auto parts = split(s, 'x');
  if (parts.size() != 2) throw UsageError("--area expects WIDTHxHEIGHT, got '" + std::string(s) + "'");
  return {parse_number(parts[0], "--area"), parse_number(parts[1], "--area")};
}

/// "50,30,20" -> workers, uavs, vehicles.
inline std::array<int, 3> parse_agents(std::string_view s) {
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw UsageError("--agents expects WORKERS,UAVS,VEHICLES");
  std::array<int, 3> out{};
  for (int i = 0; i < 3; ++i) {
    const double v = parse_number(parts[i], "--agents");
    if (v < 0 || v != static_cast<int>(v)) throw UsageError("--agents: counts must be nonnegative integers");
    out[i] = static_cast<int>(v);
  }
  return out;
}

/// "3" or "2,3".
inline UniformRange parse_range(std::string_view s, std::string_view what) {
  const auto parts = split(s, ',');
  if (parts.size() == 1) {
    const double v = parse_number(parts[0], what);
    return {v, v};
  }
  if (parts.size() != 2) throw UsageError(std::string(what) + " expects VALUE or LO,HI");
  return {parse_number(parts[0], what), parse_number(parts[1], what)};
}

/// "1,2,7" or "1-5" or a mix such as "1-3,9".
inline std::vector<std::uint64_t> parse_seeds(std::string_view s) {
  std::vector<std::uint64_t> out;
  auto whole = [](std::string_view t) {
    std::uint64_t v = 0;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || r.ec != std::errc{} || r.ptr != t.data() + t.size())
      throw UsageError("--seeds: not a seed: '" + std::string(t) + "'");
    return v;
  };
  for (const auto& part : split(s, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      out.push_back(whole(part));
      continue;
    }
    const auto lo = whole(std::string_view(part).substr(0, dash));
    const auto hi = whole(std::string_view(part).substr(dash + 1));
    if (hi < lo) throw UsageError("--seeds: empty range '" + part + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

struct GenerateArgs {
  std::string area = "30x30";
  int tasks = 120;
  int charges = 20;
  std::string agents = "50,30,20";
  std::string online = "60";  // minutes or "full"
  std::string task_cost = "3";
  std::string charge_power = "10";
  double interval = 10.0;
  double limit_time = 180.0;
  std::uint64_t seed = 0;
  std::string output;
};

inline GenParams to_gen_params(const GenerateArgs& a) {
  GenParams p;
  std::tie(p.width, p.height) = parse_area(a.area);
  p.tasks_n = a.tasks;
  p.charges_n = a.charges;
  const auto ag = parse_agents(a.agents);
  p.workers_n = ag[0];
  p.uavs_n = ag[1];
  p.vehicles_n = ag[2];
  if (a.online == "full") {
    p.online_minutes.reset();
  } else {
    p.online_minutes = parse_number(a.online, "--online");
  }
  p.task_cost = parse_range(a.task_cost, "--task-cost");
  p.charge_power = parse_range(a.charge_power, "--charge-power");
  p.interval = a.interval;
  p.limit_time = a.limit_time;
  p.seed = a.seed;
  return p;
}

struct RunArgs {
  std::string scenario;
  std::vector<std::string> schedulers{"mpq"};
  std::string seeds = "1";
  std::optional<std::string> weights;
  std::optional<std::string> wind, comms;
  std::optional<double> failure, match_loss;
  std::string out;
  bool trace = false;
  int ils_iter = 1000;
  int mpq_ils_iter = 100;
  int kwta_k = 5;
};

inline Scenario prepared_scenario(const RunArgs& a) {
  Scenario s = load_scenario(a.scenario);
  if (a.weights) s.weight_mode = parse_weight_mode(*a.weights);
  if (a.wind) s.perturbations.wind = parse_range(*a.wind, "--wind");
  if (a.comms) s.perturbations.comms_cost = parse_range(*a.comms, "--comms");
  if (a.failure) s.perturbations.failure_prob = *a.failure;
  if (a.match_loss) s.perturbations.match_loss_prob = *a.match_loss;
  if (const auto v = validate_scenario(s); !v.empty()) throw std::invalid_argument("invalid run settings: " + v.front().str());
  return s;
}

inline std::filesystem::path output_dir(const std::string& flag) {
  std::filesystem::path dir = flag.empty() ? default_output_dir() : std::filesystem::path(flag);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

/// Runs every scheduler on every seed; writes the CSVs, traces and a
/// summary.json, and prints the comparison table to `out`.
inline std::vector<Summary> execute_runs(const RunArgs& a, std::ostream& out) {
  const Scenario sc = prepared_scenario(a);
  const auto seeds = parse_seeds(a.seeds);
  if (seeds.empty()) throw UsageError("--seeds: no seeds given");
  std::vector<SchedulerKind> kinds;
  for (const auto& s : a.schedulers) {
    try {
      kinds.push_back(parse_scheduler(s));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const auto dir = output_dir(a.out);

  std::vector<Summary> rows;
  nlohmann::json doc = {{"scenario", a.scenario}, {"weight_mode", to_string(sc.weight_mode)},
                        {"perturbations", sc.perturbations}, {"runs", nlohmann::json::array()}};
  for (const auto kind : kinds) {
    std::vector<EpisodeResult> results;
    for (const auto seed : seeds) {
      RunOptions opt;
      opt.scheduler = kind;
      opt.seed = seed;
      opt.ils.max_iter = a.ils_iter;
      opt.mpq.ils.max_iter = a.mpq_ils_iter;
      opt.kwta.k = static_cast<std::size_t>(a.kwta_k);
      std::vector<MpqTrace> traces;
      if (a.trace) opt.mpq_traces = &traces;
      results.push_back(run_episode(sc, opt));
      const std::string stem = std::string(to_string(kind)) + "_seed" + std::to_string(seed);
      std::ostringstream csv;
      write_epoch_csv(csv, results.back());
      write_text(dir / (stem + ".csv"), csv.str());
      if (a.trace && kind == SchedulerKind::mpq) {
        std::ostringstream tr;
        for (std::size_t e = 0; e < traces.size(); ++e) {
          tr << "# epoch " << e << '\n';
          write_mpq_trace(tr, traces[e]);
        }
        write_text(dir / (stem + ".trace"), tr.str());
      }
    }
    rows.push_back(summarize(results));
    doc["runs"].push_back(summary_json(rows.back()));
  }
  write_text(dir / "summary.json", doc.dump(2) + "\n");
  std::ostringstream table;
  write_comparison_table(table, rows);
  write_text(dir / "comparison.txt", table.str());
  out << table.str();
  return rows;
}

struct DumpArgs {
  std::string scenario;
  int epoch = 0;
  std::string scheduler = "mpq";
  std::uint64_t seed = 1;
  std::string output;
};

/// The graph the solvers see at the given epoch, after earlier epochs were
/// decided by the chosen scheduler.
inline WeightedGraph graph_at_epoch(const Scenario& sc, const DumpArgs& a) {
  const int epochs = static_cast<int>(std::lround(sc.limit_time / sc.interval));
  if (a.epoch < 0 || a.epoch >= epochs) throw UsageError("--epoch must lie in [0, " + std::to_string(epochs) + ")");
  RunOptions opt;
  opt.scheduler = parse_scheduler(a.scheduler);
  opt.seed = a.seed;
  WorldState world(sc, a.seed);
  for (int e = 0;; ++e) {
    const double t = e * sc.interval;
    world.advance(t);
    world.begin_epoch();
    const Snapshot snap = world.snapshot();
    if (e == a.epoch) return build_graph(snap, compute_cost_tables(snap), sc.weight_mode);
    const auto solver_seed = Rng::stream(a.seed, "solver", static_cast<std::uint64_t>(e))();
    world.commit(decide(sc, snap, opt, solver_seed));
    world.advance(t + sc.interval);
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Scheduling of UAVs, workers and charging vehicles on per-epoch conflict graphs"};
  app.name("hocs");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a random scenario file");
  g->add_option("--area", gen.area, "WIDTHxHEIGHT in km")->capture_default_str();
  g->add_option("--tasks", gen.tasks, "Number of tasks")->capture_default_str();
  g->add_option("--charges", gen.charges, "Number of charging points")->capture_default_str();
  g->add_option("--agents", gen.agents, "WORKERS,UAVS,VEHICLES")->capture_default_str();
  g->add_option("--online", gen.online, "Minutes each agent is online, or 'full'")->capture_default_str();
  g->add_option("--task-cost", gen.task_cost, "Task energy cost: VALUE or LO,HI")->capture_default_str();
  g->add_option("--charge-power", gen.charge_power, "Vehicle charge rate: VALUE or LO,HI")->capture_default_str();
  g->add_option("--interval", gen.interval, "Decision interval in minutes")->capture_default_str();
  g->add_option("--limit-time", gen.limit_time, "Horizon in minutes")->capture_default_str();
  g->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  g->add_option("-o,--output", gen.output, "Scenario file to write")->required();

  RunArgs run;
  auto add_run_flags = [&run](CLI::App* c) {
    c->add_option("scenario", run.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    c->add_option("--seeds", run.seeds, "Seeds: list and ranges, e.g. 1-5 or 1,4,9")->capture_default_str();
    c->add_option("--weights", run.weights, "Override weight mode: hierarchical or uniform")
        ->check(CLI::IsMember({"hierarchical", "uniform"}));
    c->add_option("--wind", run.wind, "Extra energy per km: VALUE or LO,HI");
    c->add_option("--comms", run.comms, "Energy drained per UAV per epoch: VALUE or LO,HI");
    c->add_option("--failure", run.failure, "Per-epoch permanent failure probability")->check(CLI::Range(0.0, 1.0));
    c->add_option("--match-loss", run.match_loss, "Probability a committed joint action is lost")
        ->check(CLI::Range(0.0, 1.0));
    c->add_option("--out", run.out, std::string("Output directory (default $") + kOutputDirEnv + " or ./hocs_out)");
    c->add_flag("--trace", run.trace, "Also write per-epoch MPQ round traces");
    c->add_option("--ils-iter", run.ils_iter, "Standalone ILS iterations")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--mpq-ils-iter", run.mpq_ils_iter, "ILS iterations per MPQ round")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c->add_option("--kwta-k", run.kwta_k, "Candidates kept by KWTA")->check(CLI::PositiveNumber)->capture_default_str();
  };
  std::string one_scheduler = "mpq";
  auto* r = app.add_subcommand("run", "Run one scheduler over seeds; write per-epoch CSVs and a summary");
  add_run_flags(r);
  r->add_option("--scheduler", one_scheduler, "mpq, ils, greedy or kwta")
      ->check(CLI::IsMember({"mpq", "ils", "greedy", "kwta"}))
      ->capture_default_str();

  auto* c = app.add_subcommand("compare", "Run several schedulers on identical seeds and tabulate");
  add_run_flags(c);
  std::string scheduler_list = "ils,mpq";
  c->add_option("--schedulers", scheduler_list, "Comma-separated scheduler names")->capture_default_str();

  DumpArgs dump;
  auto* d = app.add_subcommand("dump-graph", "Write one epoch's conflict graph as an edge list");
  d->add_option("scenario", dump.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  d->add_option("--epoch", dump.epoch, "Epoch index")->capture_default_str();
  d->add_option("--scheduler", dump.scheduler, "Scheduler deciding the earlier epochs")
      ->check(CLI::IsMember({"mpq", "ils", "greedy", "kwta"}))
      ->capture_default_str();
  d->add_option("--seed", dump.seed, "Episode seed")->capture_default_str();
  d->add_option("-o,--output", dump.output, "Edge-list file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) {
      const Scenario s = generate(to_gen_params(gen));
      if (const auto v = validate_scenario(s); !v.empty()) throw std::runtime_error("generated scenario invalid: " + v.front().str());
      const std::filesystem::path path = gen.output;
      if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
      save_scenario(path, s);
      out << "wrote " << path.string() << ": " << s.area.width << "x" << s.area.height << " km, " << s.tasks.size()
          << " tasks, " << s.charges.size() << " charges, " << s.workers.size() << " workers, " << s.uavs.size()
          << " uavs, " << s.vehicles.size() << " vehicles, seed " << s.seed << '\n';
    } else if (*r) {
      run.schedulers = {one_scheduler};
      execute_runs(run, out);
    } else if (*c) {
      run.schedulers = split(scheduler_list, ',');
      execute_runs(run, out);
    } else if (*d) {
      const Scenario s = load_scenario(dump.scenario);
      const WeightedGraph graph = graph_at_epoch(s, dump);
      if (dump.output.empty()) {
        write_edge_list(out, graph);
      } else {
        std::ofstream f(dump.output);
        if (!f) throw std::runtime_error("cannot write " + dump.output);
        write_edge_list(f, graph);
        out << "wrote " << dump.output << ": " << graph.size() << " nodes, " << graph.edge_count() << " edges\n";
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace hocs::cli
