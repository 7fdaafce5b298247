#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace greedyicl {

/// Hard time-indexed clustering: one group label per (frame, node), with
/// labels drawn from a fixed capacity [0, capacity).
class Partition {
 public:
  Partition() = default;

  /// `labels` is row-major T x N. Throws DataError if a label is negative or
  /// not below `capacity`, or if the size does not match T * N.
  Partition(std::vector<int> labels, int num_times, int num_nodes, int capacity);

  /// Same label for every node at every frame.
  static Partition constant(int num_times, int num_nodes, int capacity, int label = 0);

  int num_times() const { return num_times_; }
  int num_nodes() const { return num_nodes_; }
  int capacity() const { return capacity_; }

  int operator()(int t, int i) const { return labels_[index(t, i)]; }
  void set(int t, int i, int group) { labels_[index(t, i)] = group; }

  std::span<const int> labels() const { return labels_; }
  std::span<const int> frame(int t) const {
    return std::span<const int>(labels_).subspan(static_cast<std::size_t>(t) * num_nodes_, num_nodes_);
  }

  /// occupancy[t][g]: number of nodes in group g at frame t.
  std::vector<std::vector<int>> occupancy() const;
  /// Group sizes summed over all frames.
  std::vector<int> aggregate_sizes() const;
  /// Groups with a nonzero aggregated size, ascending.
  std::vector<int> nonempty_groups() const;
  int num_nonempty() const { return static_cast<int>(nonempty_groups().size()); }
  /// K^(t) for every frame.
  std::vector<int> nonempty_per_frame() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::size_t index(int t, int i) const { return static_cast<std::size_t>(t) * num_nodes_ + i; }

  std::vector<int> labels_;
  int num_times_ = 0;
  int num_nodes_ = 0;
  int capacity_ = 0;
};

/// Renumbers non-empty groups 0..K-1 in order of first appearance (frame-major
/// scan); the result has capacity K.
Partition compact_labels(const Partition& p);

}  // namespace greedyicl
