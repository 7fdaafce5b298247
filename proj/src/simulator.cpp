#include "greedyicl/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "greedyicl/errors.hpp"
#include "greedyicl/random.hpp"

namespace greedyicl {

void SimConfig::validate() const {
  if (num_nodes < 1 || num_times < 1 || num_groups < 1)
    throw ConfigError("nodes, times and groups must be positive");
  if (!(pi > 0.0 && pi <= 1.0)) throw ConfigError("pi must lie in (0, 1]");
  if (!(theta0 >= 0.0 && theta0 <= 1.0)) throw ConfigError("theta0 must lie in [0, 1]");
  if (!(eps0 >= 0.0 && eps0 <= 1.0)) throw ConfigError("eps0 must lie in [0, 1]");
  if (!(perturb_scale >= 0.0) || !std::isfinite(perturb_scale))
    throw ConfigError("perturbation scale must be non-negative");
  if (num_groups == 1 && pi < 1.0)
    throw ConfigError("a single group requires pi = 1 (off-diagonal transition mass is undefined)");
}

SimOutput simulate(const SimConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const int k = cfg.num_groups;
  const int n = cfg.num_nodes;
  const int tt = cfg.num_times;

  SimOutput out;
  const double nu = k > 1 ? (1.0 - cfg.pi) / (k - 1) : 0.0;
  out.pi_matrix.assign(k, std::vector<double>(k, nu));
  for (int g = 0; g < k; ++g) out.pi_matrix[g][g] = cfg.pi;

  out.theta_real.assign(k, std::vector<double>(k, 0.0));
  for (int g = 0; g < k; ++g) {
    for (int h = cfg.directed ? 0 : g; h < k; ++h) {
      const double base = g == h ? cfg.theta0 : cfg.eps0;
      const double u = 2.0 * rng.uniform() - 1.0;
      const double value = std::clamp(base + cfg.perturb_scale * u, 0.0, 1.0);
      out.theta_real[g][h] = value;
      if (!cfg.directed) out.theta_real[h][g] = value;
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(n) * tt);
  for (int i = 0; i < n; ++i) labels[i] = static_cast<int>(rng.below(k));
  for (int t = 1; t < tt; ++t) {
    for (int i = 0; i < n; ++i) {
      const auto& row = out.pi_matrix[labels[static_cast<std::size_t>(t - 1) * n + i]];
      double u = rng.uniform();
      int next = k - 1;
      for (int h = 0; h < k; ++h) {
        u -= row[h];
        if (u < 0.0) {
          next = h;
          break;
        }
      }
      labels[static_cast<std::size_t>(t) * n + i] = next;
    }
  }

  std::vector<EdgeRow> rows;
  for (int t = 0; t < tt; ++t) {
    const int* z = labels.data() + static_cast<std::size_t>(t) * n;
    for (int i = 0; i < n; ++i)
      for (int j = cfg.directed ? 0 : i + 1; j < n; ++j)
        if (i != j && rng.bernoulli(out.theta_real[z[i]][z[j]])) rows.push_back({t, i, j});
  }
  out.network = DynamicNetwork(rows, n, tt, cfg.directed);
  out.truth = Partition(std::move(labels), tt, n, k);
  return out;
}

}  // namespace greedyicl
