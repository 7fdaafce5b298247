#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "greedyicl/metrics.hpp"
#include "greedyicl/network.hpp"
#include "greedyicl/optimizer.hpp"
#include "greedyicl/partition.hpp"
#include "greedyicl/simulator.hpp"

namespace greedyicl {

struct EdgeListOptions {
  bool one_based = false;
  bool directed = true;
  std::optional<int> num_nodes;  // inferred from the largest index when absent
  std::optional<int> num_times;
};

/// Parses `t,i,j` CSV text. Errors name the offending line (header = line 1).
DynamicNetwork parse_edge_list(std::string_view text, const EdgeListOptions& options);
DynamicNetwork read_edge_list(const std::string& path, const EdgeListOptions& options);
std::string format_edge_list(const DynamicNetwork& net, bool one_based = false);
void write_edge_list(const std::string& path, const DynamicNetwork& net, bool one_based = false);

/// `t,node,group` CSV. Every (t, node) must appear exactly once. Dimensions
/// are inferred from the data unless given; capacity is max label + 1.
Partition parse_partition(std::string_view text, std::optional<int> num_times = std::nullopt,
                          std::optional<int> num_nodes = std::nullopt);
Partition read_partition(const std::string& path, std::optional<int> num_times = std::nullopt,
                         std::optional<int> num_nodes = std::nullopt);
std::string format_partition(const Partition& p);
void write_partition(const std::string& path, const Partition& p);

/// 12 significant digits, the precision used by every writer.
std::string format_real(double value);

/// JSON documents (pretty-printed, `\n` line endings). Non-finite reals are
/// written as null.
std::string summary_json(const SummaryReport& report);
std::string fit_log_json(const FitReport& report, const Hyperparameters& hyper);
std::string simulation_log_json(const SimConfig& cfg, const SimOutput& sim);
/// Per-frame non-empty group counts, `t,nonempty_groups`.
std::string format_frame_counts(const SummaryReport& report);

/// Writes through a temporary file and renames it into place.
void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace greedyicl
