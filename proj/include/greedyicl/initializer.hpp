#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greedyicl/network.hpp"
#include "greedyicl/partition.hpp"

namespace greedyicl {

enum class InitStrategy { aggregated, colbind, rowbind, random };

std::string_view to_string(InitStrategy s);
/// Accepts `aggregated`, `colbind`, `rowbind`, `random`; throws ConfigError otherwise.
InitStrategy parse_strategy(std::string_view name);
/// Like parse_strategy, but also expands `all` to the four strategies.
std::vector<InitStrategy> parse_strategies(std::span<const std::string> names);

struct InitConfig {
  InitStrategy strategy = InitStrategy::random;
  std::uint64_t seed = 0;
  int kmeans_max_iter = 100;
  /// Overrides the randomly drawn number of groups (and the capacity).
  std::optional<int> groups;
  /// Centre and scale each k-means feature row to unit variance first.
  bool standardize_rows = false;
};

/// Lloyd's algorithm with k-means++ seeding on a row-major n x d matrix.
/// Stops at an assignment fixpoint or after `max_iter` iterations. Empty
/// clusters are refilled with the point farthest from its centroid, so every
/// returned label in [0, k) is used. Throws ConfigError unless 1 <= k <= n.
std::vector<int> kmeans(std::span<const double> points, int n, int d, int k, std::uint64_t seed,
                        int max_iter = 100);

/// k-means on the summed N x N adjacency; labels repeated over all frames.
Partition init_aggregated(const DynamicNetwork& net, const InitConfig& cfg);
/// k-means on the N x TN matrix of side-by-side adjacency matrices.
Partition init_colbind(const DynamicNetwork& net, const InitConfig& cfg);
/// k-means on the TN x N matrix of stacked adjacency matrices.
Partition init_rowbind(const DynamicNetwork& net, const InitConfig& cfg);
/// Independent uniform labels with k drawn as for rowbind.
Partition init_random(const DynamicNetwork& net, const InitConfig& cfg);

Partition initialize(const DynamicNetwork& net, const InitConfig& cfg);

/// Feature matrices fed to k-means (row-major). Undirected adjacency is
/// symmetrized.
std::vector<double> aggregated_features(const DynamicNetwork& net);
std::vector<double> colbind_features(const DynamicNetwork& net);
std::vector<double> rowbind_features(const DynamicNetwork& net);

}  // namespace greedyicl
