#include "greedyicl/partition.hpp"

#include <string>

#include "greedyicl/errors.hpp"

namespace greedyicl {

Partition::Partition(std::vector<int> labels, int num_times, int num_nodes, int capacity)
    : labels_(std::move(labels)), num_times_(num_times), num_nodes_(num_nodes), capacity_(capacity) {
  if (num_times <= 0 || num_nodes <= 0) throw DataError("partition dimensions must be positive");
  if (capacity <= 0) throw DataError("partition capacity must be positive");
  if (labels_.size() != static_cast<std::size_t>(num_times) * num_nodes)
    throw DataError("partition has " + std::to_string(labels_.size()) + " labels, expected " +
                    std::to_string(static_cast<std::size_t>(num_times) * num_nodes));
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k] < 0 || labels_[k] >= capacity)
      throw DataError("label " + std::to_string(labels_[k]) + " at frame " +
                      std::to_string(k / num_nodes) + ", node " + std::to_string(k % num_nodes) +
                      " outside [0, " + std::to_string(capacity) + ")");
  }
}

Partition Partition::constant(int num_times, int num_nodes, int capacity, int label) {
  return Partition(std::vector<int>(static_cast<std::size_t>(num_times) * num_nodes, label), num_times,
                   num_nodes, capacity);
}

std::vector<std::vector<int>> Partition::occupancy() const {
  std::vector<std::vector<int>> occ(num_times_, std::vector<int>(capacity_, 0));
  for (int t = 0; t < num_times_; ++t)
    for (int g : frame(t)) ++occ[t][g];
  return occ;
}

std::vector<int> Partition::aggregate_sizes() const {
  std::vector<int> sizes(capacity_, 0);
  for (int g : labels_) ++sizes[g];
  return sizes;
}

std::vector<int> Partition::nonempty_groups() const {
  const auto sizes = aggregate_sizes();
  std::vector<int> groups;
  for (int g = 0; g < capacity_; ++g)
    if (sizes[g] > 0) groups.push_back(g);
  return groups;
}

std::vector<int> Partition::nonempty_per_frame() const {
  std::vector<int> counts;
  counts.reserve(num_times_);
  for (const auto& row : occupancy()) {
    int k = 0;
    for (int c : row) k += c > 0;
    counts.push_back(k);
  }
  return counts;
}

Partition compact_labels(const Partition& p) {
  std::vector<int> remap(p.capacity(), -1);
  int next = 0;
  std::vector<int> labels(p.labels().begin(), p.labels().end());
  for (int& g : labels) {
    if (remap[g] < 0) remap[g] = next++;
    g = remap[g];
  }
  return Partition(std::move(labels), p.num_times(), p.num_nodes(), next);
}

}  // namespace greedyicl
