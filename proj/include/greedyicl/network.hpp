#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace greedyicl {

/// One observed edge: an interaction from node `i` to node `j` at frame `t`.
struct EdgeRow {
  int t = 0;
  int i = 0;
  int j = 0;

  friend bool operator==(const EdgeRow&, const EdgeRow&) = default;
  friend auto operator<=>(const EdgeRow&, const EdgeRow&) = default;
};

/// Binary dynamic network on a fixed node set observed over discrete frames.
///
/// Immutable after construction. Each frame keeps a sorted, deduplicated edge
/// list plus per-node adjacency in CSR form, so neighbourhood scans cost
/// O(degree). In undirected mode an edge is stored once as (min, max) and the
/// out- and in-neighbour views coincide.
class DynamicNetwork {
 public:
  DynamicNetwork() = default;

  /// Validates and deduplicates `rows`. Throws DataError naming the 1-based
  /// row on out-of-range indices or self-edges.
  DynamicNetwork(std::span<const EdgeRow> rows, int num_nodes, int num_times, bool directed);

  int num_nodes() const { return num_nodes_; }
  int num_times() const { return num_times_; }
  bool directed() const { return directed_; }
  std::size_t total_edges() const { return total_edges_; }
  std::size_t edges_at(int t) const { return frames_[t].size(); }

  /// Stored pairs of frame t, sorted. Undirected pairs satisfy first < second.
  std::span<const std::pair<int, int>> frame(int t) const { return frames_[t]; }

  std::span<const int> out_neighbors(int t, int i) const { return slice(out_, t, i); }
  std::span<const int> in_neighbors(int t, int i) const {
    return directed_ ? slice(in_, t, i) : slice(out_, t, i);
  }

  bool has_edge(int t, int i, int j) const;

  /// All edges sorted by (t, i, j); undirected edges come out with i < j.
  std::vector<EdgeRow> edge_list() const;

 private:
  struct Csr {
    std::vector<std::size_t> offsets;  // num_times * (num_nodes + 1)
    std::vector<int> targets;
  };

  std::span<const int> slice(const Csr& csr, int t, int i) const {
    const std::size_t base = static_cast<std::size_t>(t) * (num_nodes_ + 1) + i;
    return {csr.targets.data() + csr.offsets[base], csr.offsets[base + 1] - csr.offsets[base]};
  }

  void build_csr(Csr& csr, bool reversed, bool both_ends);

  int num_nodes_ = 0;
  int num_times_ = 0;
  bool directed_ = true;
  std::size_t total_edges_ = 0;
  std::vector<std::vector<std::pair<int, int>>> frames_;
  Csr out_;
  Csr in_;
};

inline DynamicNetwork network_from_edge_list(std::span<const EdgeRow> rows, int num_nodes,
                                             int num_times, bool directed) {
  return DynamicNetwork(rows, num_nodes, num_times, directed);
}

}  // namespace greedyicl
