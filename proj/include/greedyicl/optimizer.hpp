#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "greedyicl/icl.hpp"
#include "greedyicl/initializer.hpp"
#include "greedyicl/network.hpp"
#include "greedyicl/partition.hpp"
#include "greedyicl/random.hpp"

namespace greedyicl {

struct GreedyOptions {
  /// Safety cap on full sweeps; convergence normally stops far earlier.
  int max_sweeps = 200;
  /// Minimum ICL gain for a move, merge or sweep to count as an improvement.
  double tolerance = 1e-10;
};

struct FitResult {
  Partition partition;  // compacted
  IclValue icl;
  int sweeps = 0;
  std::int64_t moves_accepted = 0;
  int merges = 0;
  bool hit_sweep_cap = false;
  /// ICL total before the first sweep and after each sweep (greedy), or
  /// before and after each accepted merge (merge step).
  std::vector<double> trace;
};

/// Greedy ICL ascent from `init`: sweeps over every (frame, node) slot in a
/// freshly shuffled order, moving each slot to its best group among all
/// init.capacity() labels, until a whole sweep brings no improvement.
FitResult greedy_icl(const DynamicNetwork& net, const Partition& init, const Hyperparameters& hyper,
                     std::uint64_t seed, const GreedyOptions& options = {});

/// Repeatedly merges the first pair of groups whose union raises the ICL,
/// restarting the pair scan after each accepted merge.
FitResult merge_step(const DynamicNetwork& net, const Partition& p, const Hyperparameters& hyper,
                     const GreedyOptions& options = {});

/// greedy_icl followed by merge_step; sweeps and moves come from the greedy
/// pass, merges and the final value from the merge pass.
FitResult refine(const DynamicNetwork& net, const Partition& init, const Hyperparameters& hyper,
                 std::uint64_t seed, const GreedyOptions& options = {});

struct FitOptions {
  std::vector<InitStrategy> strategies{InitStrategy::aggregated, InitStrategy::colbind, InitStrategy::rowbind,
                                       InitStrategy::random};
  int restarts = 1;
  std::optional<int> capacity;  // overrides the strategy-drawn K_up
  std::uint64_t seed = 0;
  int kmeans_max_iter = 100;
  GreedyOptions greedy;
};

struct RunRecord {
  std::string strategy;  // strategy name, or "partition" for a given start
  int restart = 0;
  std::uint64_t seed = 0;
  int capacity = 0;
  IclValue icl;
  int num_groups = 0;
  int sweeps = 0;
  std::int64_t moves_accepted = 0;
  int merges = 0;
  bool hit_sweep_cap = false;
  double seconds = 0.0;
  std::vector<double> trace;  // as FitResult::trace
};

struct FitReport {
  FitResult best;
  std::size_t best_run = 0;
  std::vector<RunRecord> runs;
};

/// Runs refine() once per (strategy, restart) and keeps the highest ICL.
FitReport fit(const DynamicNetwork& net, const Hyperparameters& hyper, const FitOptions& options);

/// Stateful single-run driver, exposed so callers can time individual sweeps.
class GreedySweeper {
 public:
  GreedySweeper(const DynamicNetwork& net, Partition init, const Hyperparameters& hyper, std::uint64_t seed,
                double tolerance = 1e-10);

  /// One shuffled pass over every slot; returns the number of accepted moves.
  std::int64_t sweep();

  const Partition& partition() const { return partition_; }
  const BlockStats& stats() const { return stats_; }
  IclValue value() const { return icl_from_stats(stats_, terms_); }

 private:
  const DynamicNetwork& net_;
  Partition partition_;
  IclTerms terms_;
  BlockStats stats_;
  MoveEvaluator evaluator_;
  Rng rng_;
  double tolerance_;
  std::vector<std::pair<int, int>> order_;
};

}  // namespace greedyicl
