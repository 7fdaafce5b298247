#include "greedyicl/initializer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "greedyicl/errors.hpp"
#include "greedyicl/random.hpp"

namespace greedyicl {
namespace {

double squared_distance(const double* x, const double* y, int d) {
  double sum = 0.0;
  for (int k = 0; k < d; ++k) {
    const double diff = x[k] - y[k];
    sum += diff * diff;
  }
  return sum;
}

void standardize(std::vector<double>& points, int n, int d) {
  for (int r = 0; r < n; ++r) {
    double* row = points.data() + static_cast<std::size_t>(r) * d;
    double mean = 0.0;
    for (int k = 0; k < d; ++k) mean += row[k];
    mean /= d;
    double var = 0.0;
    for (int k = 0; k < d; ++k) var += (row[k] - mean) * (row[k] - mean);
    const double sd = std::sqrt(var / d);
    for (int k = 0; k < d; ++k) row[k] = sd > 0.0 ? (row[k] - mean) / sd : 0.0;
  }
}

int draw_groups(Rng& rng, std::int64_t rows) {
  const auto lo = static_cast<std::int64_t>(std::floor(0.5 * static_cast<double>(rows)));
  const auto hi = static_cast<std::int64_t>(std::floor(0.75 * static_cast<double>(rows)));
  return static_cast<int>(std::max<std::int64_t>(1, rng.between(lo, hi)));
}

// Shared driver for the three k-means strategies. `rows` x `cols` features;
// `time_constant` replicates the N row labels over all frames.
Partition kmeans_partition(const DynamicNetwork& net, const InitConfig& cfg, std::vector<double> features,
                           int rows, int cols, bool time_constant) {
  Rng rng(cfg.seed);
  const int capacity = cfg.groups ? *cfg.groups : draw_groups(rng, rows);
  if (capacity < 1) throw ConfigError("number of groups must be positive");
  if (cfg.standardize_rows) standardize(features, rows, cols);
  const auto labels = kmeans(features, rows, cols, std::min(capacity, rows), rng.next(), cfg.kmeans_max_iter);

  const int n = net.num_nodes();
  const int t = net.num_times();
  std::vector<int> all(static_cast<std::size_t>(n) * t);
  for (int f = 0; f < t; ++f)
    for (int i = 0; i < n; ++i)
      all[static_cast<std::size_t>(f) * n + i] = time_constant ? labels[i] : labels[static_cast<std::size_t>(f) * n + i];
  return Partition(std::move(all), t, n, capacity);
}

}  // namespace

std::string_view to_string(InitStrategy s) {
  switch (s) {
    case InitStrategy::aggregated: return "aggregated";
    case InitStrategy::colbind: return "colbind";
    case InitStrategy::rowbind: return "rowbind";
    case InitStrategy::random: return "random";
  }
  return "unknown";
}

InitStrategy parse_strategy(std::string_view name) {
  for (auto s : {InitStrategy::aggregated, InitStrategy::colbind, InitStrategy::rowbind, InitStrategy::random})
    if (name == to_string(s)) return s;
  throw ConfigError("unknown initialisation strategy '" + std::string(name) + "'");
}

std::vector<InitStrategy> parse_strategies(std::span<const std::string> names) {
  std::vector<InitStrategy> out;
  auto add = [&](InitStrategy s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  for (const auto& name : names) {
    if (name == "all") {
      for (auto s : {InitStrategy::aggregated, InitStrategy::colbind, InitStrategy::rowbind, InitStrategy::random})
        add(s);
    } else {
      add(parse_strategy(name));
    }
  }
  if (out.empty()) throw ConfigError("no initialisation strategy given");
  return out;
}

std::vector<int> kmeans(std::span<const double> points, int n, int d, int k, std::uint64_t seed, int max_iter) {
  if (n < 1 || d < 0) throw ConfigError("kmeans needs at least one point");
  if (k < 1 || k > n) throw ConfigError("kmeans needs 1 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  if (points.size() != static_cast<std::size_t>(n) * d) throw ConfigError("kmeans point matrix has the wrong size");
  Rng rng(seed);
  auto point = [&](int r) { return points.data() + static_cast<std::size_t>(r) * d; };

  // k-means++ seeding.
  std::vector<double> centroids(static_cast<std::size_t>(k) * d);
  auto centroid = [&](int c) { return centroids.data() + static_cast<std::size_t>(c) * d; };
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<char> chosen(n, 0);
  int pick = static_cast<int>(rng.below(n));
  for (int c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (int r = 0; r < n; ++r) total += nearest[r];
      if (total > 0.0) {
        double u = rng.uniform() * total;
        pick = -1;
        for (int r = 0; r < n; ++r) {
          if (nearest[r] <= 0.0) continue;
          pick = r;
          u -= nearest[r];
          if (u < 0.0) break;
        }
      } else {
        // All remaining points coincide with a centre: take an unused one.
        std::vector<int> unused;
        for (int r = 0; r < n; ++r)
          if (!chosen[r]) unused.push_back(r);
        pick = unused[rng.below(unused.size())];
      }
    }
    chosen[pick] = 1;
    std::copy(point(pick), point(pick) + d, centroid(c));
    for (int r = 0; r < n; ++r) nearest[r] = std::min(nearest[r], squared_distance(point(r), centroid(c), d));
  }

  std::vector<int> labels(n, -1);
  std::vector<int> sizes(k, 0);
  std::vector<double> dist(n, 0.0);
  for (int iter = 0; iter < std::max(max_iter, 1); ++iter) {
    bool changed = false;
    std::fill(sizes.begin(), sizes.end(), 0);
    for (int r = 0; r < n; ++r) {
      int best = 0;
      double best_d = squared_distance(point(r), centroid(0), d);
      for (int c = 1; c < k; ++c) {
        const double dd = squared_distance(point(r), centroid(c), d);
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      changed |= labels[r] != best;
      labels[r] = best;
      dist[r] = best_d;
      ++sizes[best];
    }

    // Refill empty clusters with the point farthest from its centroid.
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      int far = -1;
      for (int r = 0; r < n; ++r)
        if (sizes[labels[r]] > 1 && (far < 0 || dist[r] > dist[far])) far = r;
      --sizes[labels[far]];
      labels[far] = c;
      sizes[c] = 1;
      dist[far] = 0.0;
      std::copy(point(far), point(far) + d, centroid(c));
      changed = true;
    }
    if (!changed && iter > 0) break;

    std::fill(centroids.begin(), centroids.end(), 0.0);
    for (int r = 0; r < n; ++r) {
      double* c = centroid(labels[r]);
      const double* x = point(r);
      for (int q = 0; q < d; ++q) c[q] += x[q];
    }
    for (int c = 0; c < k; ++c)
      for (int q = 0; q < d; ++q) centroid(c)[q] /= sizes[c];
  }
  return labels;
}

std::vector<double> aggregated_features(const DynamicNetwork& net) {
  const auto n = static_cast<std::size_t>(net.num_nodes());
  std::vector<double> m(n * n, 0.0);
  for (int t = 0; t < net.num_times(); ++t)
    for (int i = 0; i < net.num_nodes(); ++i)
      for (int j : net.out_neighbors(t, i)) m[i * n + j] += 1.0;
  return m;
}

std::vector<double> colbind_features(const DynamicNetwork& net) {
  const auto n = static_cast<std::size_t>(net.num_nodes());
  const auto width = n * net.num_times();
  std::vector<double> m(n * width, 0.0);
  for (int t = 0; t < net.num_times(); ++t)
    for (int i = 0; i < net.num_nodes(); ++i)
      for (int j : net.out_neighbors(t, i)) m[i * width + t * n + j] = 1.0;
  return m;
}

std::vector<double> rowbind_features(const DynamicNetwork& net) {
  const auto n = static_cast<std::size_t>(net.num_nodes());
  std::vector<double> m(n * n * net.num_times(), 0.0);
  for (int t = 0; t < net.num_times(); ++t)
    for (int i = 0; i < net.num_nodes(); ++i)
      for (int j : net.out_neighbors(t, i)) m[(t * n + i) * n + j] = 1.0;
  return m;
}

Partition init_aggregated(const DynamicNetwork& net, const InitConfig& cfg) {
  const int n = net.num_nodes();
  return kmeans_partition(net, cfg, aggregated_features(net), n, n, true);
}

Partition init_colbind(const DynamicNetwork& net, const InitConfig& cfg) {
  const int n = net.num_nodes();
  return kmeans_partition(net, cfg, colbind_features(net), n, n * net.num_times(), true);
}

Partition init_rowbind(const DynamicNetwork& net, const InitConfig& cfg) {
  const int n = net.num_nodes();
  return kmeans_partition(net, cfg, rowbind_features(net), n * net.num_times(), n, false);
}

Partition init_random(const DynamicNetwork& net, const InitConfig& cfg) {
  Rng rng(cfg.seed);
  const int n = net.num_nodes();
  const int t = net.num_times();
  const int capacity = cfg.groups ? *cfg.groups : draw_groups(rng, static_cast<std::int64_t>(n) * t);
  if (capacity < 1) throw ConfigError("number of groups must be positive");
  std::vector<int> labels(static_cast<std::size_t>(n) * t);
  for (int& g : labels) g = static_cast<int>(rng.below(capacity));
  return Partition(std::move(labels), t, n, capacity);
}

Partition initialize(const DynamicNetwork& net, const InitConfig& cfg) {
  switch (cfg.strategy) {
    case InitStrategy::aggregated: return init_aggregated(net, cfg);
    case InitStrategy::colbind: return init_colbind(net, cfg);
    case InitStrategy::rowbind: return init_rowbind(net, cfg);
    case InitStrategy::random: return init_random(net, cfg);
  }
  throw ConfigError("unknown initialisation strategy");
}

}  // namespace greedyicl
