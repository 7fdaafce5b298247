#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "greedyicl/icl.hpp"
#include "greedyicl/network.hpp"
#include "greedyicl/partition.hpp"

namespace greedyicl {

/// Normalized mutual information I(U, V) / sqrt(H(U) H(V)), natural logs.
/// Two single-cluster labellings score 1; exactly one zero-entropy labelling
/// scores 0. Throws DataError on a length mismatch or empty input.
double nmi(std::span<const int> a, std::span<const int> b);

/// NMI of the time-wise concatenated label vectors.
inline double nmi(const Partition& a, const Partition& b) { return nmi(a.labels(), b.labels()); }

/// Descriptive summary of a fitted partition. Groups are indexed in
/// compacted order (first appearance, frame-major).
struct SummaryReport {
  std::vector<int> nonempty_per_frame;
  std::vector<std::vector<int>> group_sizes;  // T x K
  std::vector<double> avg_out_degree;
  std::vector<double> avg_in_degree;
  std::vector<std::vector<double>> transition_means;
  std::vector<std::vector<std::optional<double>>> connection_means;
  IclValue icl;
};

/// Average degrees are means of the frame-local degree over every
/// (node, frame) membership of a group. Connection means backed by fewer than
/// `min_pairs` possible edges are left empty.
SummaryReport summarize(const DynamicNetwork& net, const Partition& p, const Hyperparameters& hyper,
                        std::int64_t min_pairs = 0);

}  // namespace greedyicl
