#include "greedyicl/network.hpp"

#include <algorithm>
#include <string>

#include "greedyicl/errors.hpp"

namespace greedyicl {

DynamicNetwork::DynamicNetwork(std::span<const EdgeRow> rows, int num_nodes, int num_times,
                               bool directed)
    : num_nodes_(num_nodes), num_times_(num_times), directed_(directed) {
  if (num_nodes <= 0) throw DataError("number of nodes must be positive");
  if (num_times <= 0) throw DataError("number of time frames must be positive");

  frames_.resize(num_times);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const EdgeRow& e = rows[r];
    const std::string where = " at row " + std::to_string(r + 1);
    if (e.t < 0 || e.t >= num_times) throw DataError("time frame out of range" + where);
    if (e.i < 0 || e.i >= num_nodes || e.j < 0 || e.j >= num_nodes)
      throw DataError("node index out of range" + where);
    if (e.i == e.j) throw DataError("self-edge" + where);
    if (directed)
      frames_[e.t].emplace_back(e.i, e.j);
    else
      frames_[e.t].emplace_back(std::min(e.i, e.j), std::max(e.i, e.j));
  }
  for (auto& f : frames_) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    total_edges_ += f.size();
  }

  if (directed) {
    build_csr(out_, false, false);
    build_csr(in_, true, false);
  } else {
    build_csr(out_, false, true);
  }
}

void DynamicNetwork::build_csr(Csr& csr, bool reversed, bool both_ends) {
  const std::size_t stride = static_cast<std::size_t>(num_nodes_) + 1;
  csr.offsets.assign(stride * num_times_, 0);
  std::size_t total = 0;
  for (int t = 0; t < num_times_; ++t) {
    std::vector<std::size_t> degree(num_nodes_, 0);
    for (const auto& [i, j] : frames_[t]) {
      ++degree[reversed ? j : i];
      if (both_ends) ++degree[j];
    }
    const std::size_t base = stride * t;
    csr.offsets[base] = total;
    for (int i = 0; i < num_nodes_; ++i) {
      total += degree[i];
      csr.offsets[base + i + 1] = total;
    }
  }
  csr.targets.assign(total, 0);
  for (int t = 0; t < num_times_; ++t) {
    const std::size_t base = stride * t;
    std::vector<std::size_t> cursor(csr.offsets.begin() + base, csr.offsets.begin() + base + num_nodes_);
    for (const auto& [i, j] : frames_[t]) {
      if (reversed) {
        csr.targets[cursor[j]++] = i;
      } else {
        csr.targets[cursor[i]++] = j;
        if (both_ends) csr.targets[cursor[j]++] = i;
      }
    }
    for (int i = 0; i < num_nodes_; ++i)
      std::sort(csr.targets.begin() + csr.offsets[base + i], csr.targets.begin() + csr.offsets[base + i + 1]);
  }
}

bool DynamicNetwork::has_edge(int t, int i, int j) const {
  if (!directed_ && i > j) std::swap(i, j);
  const auto nbrs = out_neighbors(t, i);
  return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

std::vector<EdgeRow> DynamicNetwork::edge_list() const {
  std::vector<EdgeRow> out;
  out.reserve(total_edges_);
  for (int t = 0; t < num_times_; ++t)
    for (const auto& [i, j] : frames_[t]) out.push_back({t, i, j});
  return out;
}

}  // namespace greedyicl
