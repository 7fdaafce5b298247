#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "greedyicl/errors.hpp"
#include "greedyicl/initializer.hpp"
#include "greedyicl/io.hpp"
#include "greedyicl/metrics.hpp"
#include "greedyicl/optimizer.hpp"
#include "greedyicl/simulator.hpp"

namespace greedyicl {
namespace {

struct NetworkFlags {
  std::string path;
  bool directed = false;
  bool one_based = false;
  std::optional<int> nodes;
  std::optional<int> times;

  void attach(CLI::App* cmd) {
    cmd->add_option("-i,--input", path, "Edge-list CSV with header t,i,j")->required();
    cmd->add_flag("--directed", directed, "Treat edges as directed");
    cmd->add_flag("--one-based", one_based, "Input indices start at 1");
    cmd->add_option("--nodes", nodes, "Number of nodes (default: inferred)");
    cmd->add_option("--times", times, "Number of frames (default: inferred)");
  }

  DynamicNetwork load() const {
    return read_edge_list(path, EdgeListOptions{one_based, directed, nodes, times});
  }
};

struct HyperFlags {
  Hyperparameters hyper;

  void attach(CLI::App* cmd) {
    cmd->add_option("--a", hyper.a, "Beta prior shape a")->capture_default_str();
    cmd->add_option("--b", hyper.b, "Beta prior shape b")->capture_default_str();
    cmd->add_option("--delta", hyper.delta, "Dirichlet concentration")->capture_default_str();
  }
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GREEDYICL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("GREEDYICL_SEED must be a non-negative integer");
    }
  }
  return 0;
}

void print_matrix(std::ostream& out, const char* name, const std::vector<std::vector<double>>& m) {
  out << name << ":\n";
  for (const auto& row : m) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? " " : "  ") << format_real(row[k]);
    out << "\n";
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Greedy exact-ICL clustering of dynamic networks"};
  app.require_subcommand(1);
  app.fallthrough();
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "Increase logging (repeatable)");

  // simulate
  SimConfig sim;
  std::string sim_out, sim_truth, sim_log;
  std::optional<std::uint64_t> sim_seed;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic dynamic network");
  simulate_cmd->add_option("--nodes", sim.num_nodes)->capture_default_str();
  simulate_cmd->add_option("--times", sim.num_times)->capture_default_str();
  simulate_cmd->add_option("--groups", sim.num_groups)->capture_default_str();
  simulate_cmd->add_option("--pi", sim.pi, "Probability of staying in a group")->capture_default_str();
  simulate_cmd->add_option("--theta0", sim.theta0, "Within-group connection probability")->capture_default_str();
  simulate_cmd->add_option("--eps0", sim.eps0, "Between-group connection probability")->capture_default_str();
  simulate_cmd->add_option("--perturb", sim.perturb_scale, "Uniform perturbation half-width")->capture_default_str();
  simulate_cmd->add_flag("--directed", sim.directed, "Generate directed edges");
  simulate_cmd->add_option("--seed", sim_seed, "Random seed (default: $GREEDYICL_SEED or 0)");
  simulate_cmd->add_option("--out", sim_out, "Edge-list CSV to write")->required();
  simulate_cmd->add_option("--truth", sim_truth, "True partition CSV to write")->required();
  simulate_cmd->add_option("--log", sim_log, "Run-log JSON with the realized parameters");

  // fit
  NetworkFlags fit_net;
  HyperFlags fit_hyper;
  std::vector<std::string> fit_init{"all"};
  FitOptions fit_opts;
  std::optional<std::uint64_t> fit_seed;
  std::optional<int> fit_kup;
  std::string fit_out, fit_summary, fit_log, fit_from;
  std::int64_t fit_min_pairs = 0;
  auto* fit_cmd = app.add_subcommand("fit", "Cluster a dynamic network by greedy ICL maximisation");
  fit_net.attach(fit_cmd);
  fit_hyper.attach(fit_cmd);
  fit_cmd->add_option("--init", fit_init, "aggregated, colbind, rowbind, random or all")->capture_default_str();
  fit_cmd->add_option("--init-from", fit_from, "Start from this partition CSV instead");
  fit_cmd->add_option("--restarts", fit_opts.restarts, "Runs per strategy")->capture_default_str();
  fit_cmd->add_option("--seed", fit_seed, "Random seed (default: $GREEDYICL_SEED or 0)");
  fit_cmd->add_option("--kup", fit_kup, "Override the number of initial groups K_up");
  fit_cmd->add_option("--max-sweeps", fit_opts.greedy.max_sweeps)->capture_default_str();
  fit_cmd->add_option("--kmeans-iter", fit_opts.kmeans_max_iter)->capture_default_str();
  fit_cmd->add_option("--min-pairs", fit_min_pairs, "Blank connection means with fewer possible edges");
  fit_cmd->add_option("-o,--out", fit_out, "Allocations CSV to write")->required();
  fit_cmd->add_option("--summary", fit_summary, "Summary JSON to write");
  fit_cmd->add_option("--log", fit_log, "Run-log JSON to write");

  // score
  std::string score_pred, score_truth;
  auto* score_cmd = app.add_subcommand("score", "NMI between two partitions");
  score_cmd->add_option("--pred", score_pred, "Predicted partition CSV")->required();
  score_cmd->add_option("--truth", score_truth, "Reference partition CSV")->required();

  // summarize
  NetworkFlags sum_net;
  HyperFlags sum_hyper;
  std::string sum_partition, sum_out, sum_frames;
  std::int64_t sum_min_pairs = 0;
  auto* summarize_cmd = app.add_subcommand("summarize", "Describe a partition of a network");
  sum_net.attach(summarize_cmd);
  sum_hyper.attach(summarize_cmd);
  summarize_cmd->add_option("-p,--partition", sum_partition, "Partition CSV")->required();
  summarize_cmd->add_option("--summary", sum_out, "Summary JSON to write")->required();
  summarize_cmd->add_option("--frames", sum_frames, "Per-frame non-empty group counts CSV");
  summarize_cmd->add_option("--min-pairs", sum_min_pairs, "Blank connection means with fewer possible edges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate_cmd) {
      sim.seed = sim_seed ? *sim_seed : default_seed();
      const SimOutput result = simulate(sim);
      const std::string net_csv = format_edge_list(result.network);
      const std::string truth_csv = format_partition(result.truth);
      const std::string log = simulation_log_json(sim, result);
      write_text_file(sim_out, net_csv);
      write_text_file(sim_truth, truth_csv);
      if (!sim_log.empty()) write_text_file(sim_log, log);
      print_matrix(out, "theta_real", result.theta_real);
      print_matrix(out, "pi_matrix", result.pi_matrix);
      out << "edges: " << result.network.total_edges() << "\n";
      return kOk;
    }

    if (*fit_cmd) {
      fit_hyper.hyper.validate();
      fit_opts.seed = fit_seed ? *fit_seed : default_seed();
      fit_opts.strategies = parse_strategies(fit_init);
      fit_opts.capacity = fit_kup;
      if (fit_opts.restarts < 1) throw ConfigError("--restarts must be at least 1");
      if (fit_opts.greedy.max_sweeps < 1) throw ConfigError("--max-sweeps must be at least 1");
      if (fit_kup && *fit_kup < 1) throw ConfigError("--kup must be at least 1");

      const DynamicNetwork net = fit_net.load();
      FitReport report;
      if (!fit_from.empty()) {
        const Partition given = read_partition(fit_from, net.num_times(), net.num_nodes());
        const int capacity = std::max(given.capacity(), fit_kup.value_or(0));
        const Partition init({given.labels().begin(), given.labels().end()}, net.num_times(), net.num_nodes(),
                             capacity);
        const auto start = std::chrono::steady_clock::now();
        report.best = refine(net, init, fit_hyper.hyper, fit_opts.seed, fit_opts.greedy);
        report.runs.push_back(RunRecord{"partition", 0, fit_opts.seed, capacity, report.best.icl,
                                        report.best.partition.num_nonempty(), report.best.sweeps,
                                        report.best.moves_accepted, report.best.merges, report.best.hit_sweep_cap,
                                        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(),
                                        report.best.trace});
      } else {
        report = fit(net, fit_hyper.hyper, fit_opts);
      }
      if (verbosity > 0) {
        for (const auto& run : report.runs)
          err << run.strategy << " #" << run.restart << ": icl=" << format_real(run.icl.total)
              << " groups=" << run.num_groups << " sweeps=" << run.sweeps << " merges=" << run.merges
              << " time=" << format_real(run.seconds) << "s\n";
      }

      const std::string alloc = format_partition(report.best.partition);
      const std::string summary =
          fit_summary.empty() ? "" : summary_json(summarize(net, report.best.partition, fit_hyper.hyper, fit_min_pairs));
      const std::string log = fit_log.empty() ? "" : fit_log_json(report, fit_hyper.hyper);
      write_text_file(fit_out, alloc);
      if (!fit_summary.empty()) write_text_file(fit_summary, summary);
      if (!fit_log.empty()) write_text_file(fit_log, log);
      out << "icl " << format_real(report.best.icl.total) << "\n"
          << "groups " << report.best.partition.num_nonempty() << "\n";
      return kOk;
    }

    if (*score_cmd) {
      const Partition pred = read_partition(score_pred);
      const Partition truth = read_partition(score_truth);
      if (pred.num_times() != truth.num_times() || pred.num_nodes() != truth.num_nodes())
        throw DataError("partitions have different dimensions");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", nmi(pred, truth));
      out << buf << "\n";
      return kOk;
    }

    if (*summarize_cmd) {
      sum_hyper.hyper.validate();
      const DynamicNetwork net = sum_net.load();
      const Partition p = read_partition(sum_partition, net.num_times(), net.num_nodes());
      const SummaryReport report = summarize(net, p, sum_hyper.hyper, sum_min_pairs);
      const std::string json = summary_json(report);
      const std::string frames = format_frame_counts(report);
      write_text_file(sum_out, json);
      if (!sum_frames.empty()) write_text_file(sum_frames, frames);
      out << "icl " << format_real(report.icl.total) << "\n"
          << "groups " << report.group_sizes.size() << "\n";
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace greedyicl
