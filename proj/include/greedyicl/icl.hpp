#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "greedyicl/network.hpp"
#include "greedyicl/partition.hpp"

namespace greedyicl {

/// Symmetric conjugate hyperparameters: Beta(a, b) on every connection
/// probability and Dirichlet(delta, ..., delta) on every transition row.
struct Hyperparameters {
  double a = 1.0;
  double b = 1.0;
  double delta = 1.0;

  /// Throws ConfigError unless all three are strictly positive and finite.
  void validate() const;
};

/// Sufficient statistics of a (network, partition) pair. All matrices are
/// capacity x capacity, row-major. In undirected mode only the upper triangle
/// (g <= h) of `eta` and `npairs` is populated.
struct BlockStats {
  int capacity = 0;
  int num_nodes = 0;
  int num_times = 0;
  bool directed = true;

  std::vector<std::int64_t> eta;           // observed edges per block
  std::vector<std::int64_t> npairs;        // possible edges per block
  std::vector<std::int64_t> trans;         // transition counts g -> h
  std::vector<std::int64_t> trans_rows;    // row sums of `trans`
  std::vector<int> occupancy;              // num_times x capacity
  std::vector<std::int64_t> first_counts;  // group sizes at frame 0
  std::vector<std::int64_t> later_counts;  // group sizes summed over frames 1..T-1

  std::size_t cell(int g, int h) const { return static_cast<std::size_t>(g) * capacity + h; }
  /// Block index honouring the undirected (min, max) convention.
  std::size_t block(int g, int h) const {
    return (!directed && g > h) ? cell(h, g) : cell(g, h);
  }
  int occ(int t, int g) const { return occupancy[static_cast<std::size_t>(t) * capacity + g]; }
  std::int64_t group_size(int g) const { return first_counts[g] + later_counts[g]; }
  std::vector<int> nonempty_groups() const;
  int num_nonempty() const;

  friend bool operator==(const BlockStats&, const BlockStats&) = default;
};

/// Decomposed exact ICL. `stranded` counts first-frame nodes whose group has
/// zero mass in the empirical initial distribution; when it is positive the
/// prior (and total) is -inf and `log_prior_finite` holds the prior with those
/// terms left out, which gives the optimizer a usable ordering.
struct IclValue {
  double log_lik = 0.0;
  double log_prior = 0.0;
  double total = 0.0;
  std::int64_t stranded = 0;
  double log_prior_finite = 0.0;

  bool feasible() const { return stranded == 0; }
  double finite_total() const { return log_lik + log_prior_finite; }
};

/// True when `x` beats `y` by more than `tol`: fewer stranded nodes first,
/// then a larger finite total.
bool icl_improves(const IclValue& x, const IclValue& y, double tol);

/// Log-gamma based term evaluator for a fixed set of hyperparameters. Caches
/// lgamma over the integer count ranges a network of the given shape can
/// produce (up to a fixed table limit; larger arguments fall back to lgamma).
class IclTerms {
 public:
  IclTerms(const Hyperparameters& hyper, int num_nodes, int num_times, bool directed);

  const Hyperparameters& hyper() const { return hyper_; }
  int num_nodes() const { return num_nodes_; }
  int num_times() const { return num_times_; }

  /// Beta-Bernoulli log marginal of one block; exactly 0 when npairs == 0.
  double block(std::int64_t eta, std::int64_t npairs) const {
    if (npairs == 0) return 0.0;
    return beta_norm_ + lg(lg_a_, hyper_.a, eta) + lg(lg_b_, hyper_.b, npairs - eta) -
           lg(lg_ab_, hyper_.a + hyper_.b, npairs);
  }

  /// lgamma(delta + r) - lgamma(delta); exactly 0 for r == 0.
  double dirichlet_cell(std::int64_t r) const {
    return r == 0 ? 0.0 : lg(lg_delta_, hyper_.delta, r) - lg_delta_[0];
  }

  /// lgamma(K delta) - lgamma(K delta + r); exactly 0 for r == 0.
  double dirichlet_row(int k, std::int64_t r) const;

 private:
  static double lg(const std::vector<double>& table, double offset, std::int64_t n);

  Hyperparameters hyper_;
  int num_nodes_;
  int num_times_;
  double beta_norm_;
  std::vector<double> lg_a_, lg_b_, lg_ab_, lg_delta_;
  std::vector<double> lg_int_;  // lgamma(n) for dirichlet_row when delta == 1
};

BlockStats build_stats(const DynamicNetwork& net, const Partition& p);

/// Sum of block terms over group pairs drawn from `active` (g <= h when
/// undirected).
double log_marginal_likelihood(const BlockStats& stats, const Hyperparameters& hyper,
                               std::span<const int> active);

/// Dirichlet-multinomial part of the marginal prior, rows and columns over
/// `active` with K = active.size().
double log_transition_prior(const BlockStats& stats, const Hyperparameters& hyper,
                            std::span<const int> active);

/// log p(Z^(1)) under the empirical initial multinomial (uniform over
/// `active` when there is a single frame). May be -inf.
double log_initial_prior(const BlockStats& stats, std::span<const int> first_frame_labels,
                         std::span<const int> active);

double log_marginal_prior(const BlockStats& stats, const Hyperparameters& hyper,
                          std::span<const int> first_frame_labels, std::span<const int> active);

/// Exact ICL with the active set taken as the non-empty groups.
IclValue icl_from_stats(const BlockStats& stats, const IclTerms& terms);
IclValue icl(const DynamicNetwork& net, const Partition& p, const Hyperparameters& hyper);

/// Change of the ICL when node i at frame t moves to `g_new`, without full
/// recomputation. Exactly 0 for the current group. Returns +/-inf when the
/// move changes feasibility and NaN when both states are infeasible.
double delta_move(const BlockStats& stats, const DynamicNetwork& net, const Partition& p, int t,
                  int i, int g_new, const Hyperparameters& hyper);

/// Reallocates (t, i) to `g_new`, updating `p` and every statistic in place.
void apply_move(BlockStats& stats, const DynamicNetwork& net, Partition& p, int t, int i, int g_new);

/// Stats of the partition obtained by relabelling `drop` as `keep`.
BlockStats merge_groups(const BlockStats& stats, int keep, int drop);

/// Posterior means (delta + R_gh) / (K delta + R_g.), indexed by position in
/// `active`.
std::vector<std::vector<double>> posterior_mean_transitions(const BlockStats& stats,
                                                            const Hyperparameters& hyper,
                                                            std::span<const int> active);

/// Posterior means (a + eta) / (a + b + N); entries whose pair count is below
/// `min_pairs` are left empty. Undirected results are symmetric.
std::vector<std::vector<std::optional<double>>> posterior_mean_connections(
    const BlockStats& stats, const Hyperparameters& hyper, std::span<const int> active,
    std::int64_t min_pairs = 0);

/// ICL change of moving one (frame, node) slot, split like IclValue.
struct MoveDelta {
  std::int64_t stranded = 0;
  double value = 0.0;
};

/// Evaluates all K_up reallocations of one (frame, node) slot at once.
///
/// The slot is detached virtually (statistics are adjusted on the fly, never
/// mutated) and the attach gain is computed for every target group. Each gain
/// touches only blocks against groups occupied at that frame, so one call costs
/// O(degree + K_up * K_t) with K_t the number of groups present at frame t.
class MoveEvaluator {
 public:
  explicit MoveEvaluator(const IclTerms& terms);

  /// Fills deltas() with the ICL change of moving (t, i) to each group.
  void evaluate(const BlockStats& stats, const DynamicNetwork& net, const Partition& p, int t, int i);

  std::span<const MoveDelta> deltas() const { return deltas_; }

 private:
  struct Slot {
    int t, i, g_old, prev, next;  // prev/next are -1 at the sequence ends
  };

  void scan_neighbours(const BlockStats& stats, const DynamicNetwork& net, const Partition& p, const Slot& s);
  std::int64_t eta_det(const BlockStats& stats, const Slot& s, int g, int h) const;
  std::int64_t npairs_det(const BlockStats& stats, const Slot& s, int g, int h) const;
  double likelihood_gain(const BlockStats& stats, const Slot& s, int g) const;
  MoveDelta prior_gain(const BlockStats& stats, const Slot& s, int g) const;
  std::int64_t trans_det(const BlockStats& stats, const Slot& s, int g, int h) const;
  std::int64_t row_det(const BlockStats& stats, const Slot& s, int g) const;
  std::int64_t size_det(const BlockStats& stats, const Slot& s, int g) const;

  const IclTerms& terms_;
  std::vector<std::int64_t> out_count_;  // edges from the slot to each group (all edges if undirected)
  std::vector<std::int64_t> in_count_;
  std::vector<int> occ_det_;             // frame occupancy with the slot removed
  std::vector<int> present_;             // groups with occ_det_ > 0
  std::vector<MoveDelta> gains_;
  std::vector<MoveDelta> deltas_;
  int k_det_ = 0;
  double rows_det_same_k_ = 0.0;  // sum of dirichlet_row over detached rows at K_det
  double rows_det_plus_k_ = 0.0;  // same at K_det + 1
};

}  // namespace greedyicl
