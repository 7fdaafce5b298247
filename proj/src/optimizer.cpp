#include "greedyicl/optimizer.hpp"

#include <chrono>

#include "greedyicl/errors.hpp"
#include "greedyicl/random.hpp"

namespace greedyicl {
namespace {

bool beats(const MoveDelta& x, const MoveDelta& y) {
  if (x.stranded != y.stranded) return x.stranded < y.stranded;
  return x.value > y.value;
}

FitResult merge_impl(const DynamicNetwork& net, const Partition& start, const IclTerms& terms,
                     const GreedyOptions& options) {
  Partition p = compact_labels(start);
  BlockStats stats = build_stats(net, p);
  FitResult result;
  result.icl = icl_from_stats(stats, terms);
  result.trace.push_back(result.icl.total);

  bool merged = true;
  while (merged) {
    merged = false;
    const auto groups = stats.nonempty_groups();
    for (std::size_t x = 0; x < groups.size() && !merged; ++x) {
      for (std::size_t y = x + 1; y < groups.size() && !merged; ++y) {
        BlockStats candidate = merge_groups(stats, groups[x], groups[y]);
        const IclValue value = icl_from_stats(candidate, terms);
        if (!icl_improves(value, result.icl, options.tolerance)) continue;
        stats = std::move(candidate);
        result.icl = value;
        result.trace.push_back(value.total);
        ++result.merges;
        merged = true;
        for (int t = 0; t < p.num_times(); ++t)
          for (int i = 0; i < p.num_nodes(); ++i)
            if (p(t, i) == groups[y]) p.set(t, i, groups[x]);
      }
    }
  }
  result.partition = compact_labels(p);
  return result;
}

}  // namespace

GreedySweeper::GreedySweeper(const DynamicNetwork& net, Partition init, const Hyperparameters& hyper,
                             std::uint64_t seed, double tolerance)
    : net_(net),
      partition_(std::move(init)),
      terms_(hyper, net.num_nodes(), net.num_times(), net.directed()),
      stats_(build_stats(net, partition_)),
      evaluator_(terms_),
      rng_(seed),
      tolerance_(tolerance) {
  for (int t = 0; t < net.num_times(); ++t)
    for (int i = 0; i < net.num_nodes(); ++i) order_.emplace_back(t, i);
}

std::int64_t GreedySweeper::sweep() {
  // Restore the canonical order so each sweep's shuffle depends only on the rng.
  std::size_t k = 0;
  for (int t = 0; t < net_.num_times(); ++t)
    for (int i = 0; i < net_.num_nodes(); ++i) order_[k++] = {t, i};
  rng_.shuffle(std::span<std::pair<int, int>>(order_));

  std::int64_t accepted = 0;
  for (const auto& [t, i] : order_) {
    evaluator_.evaluate(stats_, net_, partition_, t, i);
    const auto deltas = evaluator_.deltas();
    int best = partition_(t, i);
    MoveDelta best_delta{};
    for (int g = 0; g < stats_.capacity; ++g) {
      if (beats(deltas[g], best_delta)) {
        best = g;
        best_delta = deltas[g];
      }
    }
    // Near-zero gains keep the node where it is.
    const bool improves = best_delta.stranded < 0 || (best_delta.stranded == 0 && best_delta.value > tolerance_);
    if (best != partition_(t, i) && improves) {
      apply_move(stats_, net_, partition_, t, i, best);
      ++accepted;
    }
  }
  return accepted;
}

FitResult greedy_icl(const DynamicNetwork& net, const Partition& init, const Hyperparameters& hyper,
                     std::uint64_t seed, const GreedyOptions& options) {
  if (init.num_nodes() != net.num_nodes() || init.num_times() != net.num_times())
    throw DataError("initial partition does not match the network dimensions");
  GreedySweeper sweeper(net, init, hyper, seed, options.tolerance);
  FitResult result;
  IclValue stop = sweeper.value();
  result.trace.push_back(stop.total);
  while (true) {
    if (result.sweeps >= options.max_sweeps) {
      result.hit_sweep_cap = true;
      break;
    }
    result.moves_accepted += sweeper.sweep();
    ++result.sweeps;
    const IclValue current = sweeper.value();
    result.trace.push_back(current.total);
    if (!icl_improves(current, stop, options.tolerance)) break;
    stop = current;
  }
  result.partition = compact_labels(sweeper.partition());
  result.icl = icl(net, result.partition, hyper);
  return result;
}

FitResult merge_step(const DynamicNetwork& net, const Partition& p, const Hyperparameters& hyper,
                     const GreedyOptions& options) {
  const IclTerms terms(hyper, net.num_nodes(), net.num_times(), net.directed());
  return merge_impl(net, p, terms, options);
}

FitResult refine(const DynamicNetwork& net, const Partition& init, const Hyperparameters& hyper,
                 std::uint64_t seed, const GreedyOptions& options) {
  FitResult greedy = greedy_icl(net, init, hyper, seed, options);
  FitResult merged = merge_step(net, greedy.partition, hyper, options);
  merged.sweeps = greedy.sweeps;
  merged.moves_accepted = greedy.moves_accepted;
  merged.hit_sweep_cap = greedy.hit_sweep_cap;
  greedy.trace.insert(greedy.trace.end(), merged.trace.begin() + 1, merged.trace.end());
  merged.trace = std::move(greedy.trace);
  return merged;
}

FitReport fit(const DynamicNetwork& net, const Hyperparameters& hyper, const FitOptions& options) {
  hyper.validate();
  if (options.strategies.empty()) throw ConfigError("no initialisation strategy given");
  if (options.restarts < 1) throw ConfigError("restarts must be at least 1");
  if (options.capacity && *options.capacity < 1) throw ConfigError("K_up must be at least 1");

  FitReport report;
  std::uint64_t stream = 0;
  for (InitStrategy strategy : options.strategies) {
    for (int restart = 0; restart < options.restarts; ++restart) {
      const auto start = std::chrono::steady_clock::now();
      const std::uint64_t run_seed = derive_seed(options.seed, stream++);
      InitConfig cfg;
      cfg.strategy = strategy;
      cfg.seed = derive_seed(run_seed, 0);
      cfg.kmeans_max_iter = options.kmeans_max_iter;
      cfg.groups = options.capacity;
      const Partition init = initialize(net, cfg);
      FitResult result = refine(net, init, hyper, derive_seed(run_seed, 1), options.greedy);

      RunRecord record{std::string(to_string(strategy)),
                       restart,
                       run_seed,
                       init.capacity(),
                       result.icl,
                       result.partition.num_nonempty(),
                       result.sweeps,
                       result.moves_accepted,
                       result.merges,
                       result.hit_sweep_cap,
                       std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(),
                       result.trace};
      report.runs.push_back(record);
      if (report.runs.size() == 1 || icl_improves(result.icl, report.best.icl, 0.0)) {
        report.best = std::move(result);
        report.best_run = report.runs.size() - 1;
      }
    }
  }
  return report;
}

}  // namespace greedyicl
