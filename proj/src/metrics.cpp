#include "greedyicl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "greedyicl/errors.hpp"

namespace greedyicl {

double nmi(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw DataError("partitions have different lengths (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  if (a.empty()) throw DataError("cannot score empty partitions");

  std::map<int, double> count_a, count_b;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t k = 0; k < a.size(); ++k) {
    count_a[a[k]] += 1.0;
    count_b[b[k]] += 1.0;
    joint[{a[k], b[k]}] += 1.0;
  }
  const double n = static_cast<double>(a.size());
  auto entropy = [n](const std::map<int, double>& counts) {
    double h = 0.0;
    for (const auto& [label, c] : counts) h -= (c / n) * std::log(c / n);
    return h;
  };
  const double ha = entropy(count_a);
  const double hb = entropy(count_b);
  if (count_a.size() == 1 && count_b.size() == 1) return 1.0;
  if (count_a.size() == 1 || count_b.size() == 1) return 0.0;

  double mi = 0.0;
  for (const auto& [key, c] : joint)
    mi += (c / n) * std::log(c * n / (count_a[key.first] * count_b[key.second]));
  const double score = mi / std::sqrt(ha * hb);
  return std::clamp(score, 0.0, 1.0);
}

SummaryReport summarize(const DynamicNetwork& net, const Partition& p, const Hyperparameters& hyper,
                        std::int64_t min_pairs) {
  if (net.num_nodes() != p.num_nodes() || net.num_times() != p.num_times())
    throw DataError("partition does not match the network dimensions");
  const Partition c = compact_labels(p);
  const int k = c.capacity();
  const int tt = c.num_times();

  SummaryReport r;
  r.nonempty_per_frame = c.nonempty_per_frame();
  r.group_sizes = c.occupancy();

  std::vector<double> members(k, 0.0);
  r.avg_out_degree.assign(k, 0.0);
  r.avg_in_degree.assign(k, 0.0);
  for (int t = 0; t < tt; ++t) {
    for (int i = 0; i < c.num_nodes(); ++i) {
      const int g = c(t, i);
      members[g] += 1.0;
      r.avg_out_degree[g] += static_cast<double>(net.out_neighbors(t, i).size());
      r.avg_in_degree[g] += static_cast<double>(net.in_neighbors(t, i).size());
    }
  }
  for (int g = 0; g < k; ++g) {
    r.avg_out_degree[g] /= members[g];
    r.avg_in_degree[g] /= members[g];
  }

  const BlockStats stats = build_stats(net, c);
  const auto active = stats.nonempty_groups();
  r.transition_means = posterior_mean_transitions(stats, hyper, active);
  r.connection_means = posterior_mean_connections(stats, hyper, active, min_pairs);
  r.icl = icl_from_stats(stats, IclTerms(hyper, net.num_nodes(), net.num_times(), net.directed()));
  return r;
}

}  // namespace greedyicl
