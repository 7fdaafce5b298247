#pragma once

// Test-only reference implementations. Everything here recomputes the
// quantities from scratch with dense loops and textbook formulas so it stays
// independent of the incremental engine it checks.

#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "greedyicl/icl.hpp"
#include "greedyicl/network.hpp"
#include "greedyicl/partition.hpp"
#include "greedyicl/random.hpp"

namespace oracle {

using namespace greedyicl;

struct Instance {
  DynamicNetwork net;
  Partition part;
};

inline Instance random_instance(Rng& rng, int n, int t, int capacity, double density, bool directed) {
  std::vector<EdgeRow> rows;
  for (int f = 0; f < t; ++f)
    for (int i = 0; i < n; ++i)
      for (int j = directed ? 0 : i + 1; j < n; ++j)
        if (i != j && rng.bernoulli(density)) rows.push_back({f, i, j});
  std::vector<int> labels(static_cast<std::size_t>(n) * t);
  for (int& g : labels) g = static_cast<int>(rng.below(capacity));
  return {DynamicNetwork(rows, n, t, directed), Partition(labels, t, n, capacity)};
}

struct NaiveCounts {
  std::vector<std::vector<std::int64_t>> eta, npairs, trans;
};

inline NaiveCounts naive_counts(const DynamicNetwork& net, const Partition& p) {
  const int cap = p.capacity();
  NaiveCounts c;
  c.eta.assign(cap, std::vector<std::int64_t>(cap, 0));
  c.npairs = c.trans = c.eta;
  for (int t = 0; t < p.num_times(); ++t) {
    for (int i = 0; i < p.num_nodes(); ++i) {
      for (int j = 0; j < p.num_nodes(); ++j) {
        if (i == j || (!net.directed() && j < i)) continue;
        int g = p(t, i), h = p(t, j);
        if (!net.directed() && g > h) std::swap(g, h);
        c.npairs[g][h] += 1;
        c.eta[g][h] += net.has_edge(t, i, j) ? 1 : 0;
      }
    }
  }
  for (int t = 1; t < p.num_times(); ++t)
    for (int i = 0; i < p.num_nodes(); ++i) c.trans[p(t - 1, i)][p(t, i)] += 1;
  return c;
}

struct NaiveIcl {
  double log_lik = 0.0;
  double log_prior = 0.0;
  double total = 0.0;
};

// Direct evaluation of log p(X | Z) + log p(Z) with K = non-empty groups.
inline NaiveIcl naive_icl(const DynamicNetwork& net, const Partition& p, const Hyperparameters& hp) {
  const auto c = naive_counts(net, p);
  std::set<int> active_set;
  for (int g : p.labels()) active_set.insert(g);
  const std::vector<int> active(active_set.begin(), active_set.end());
  const double k = static_cast<double>(active.size());

  NaiveIcl out;
  for (int g : active) {
    for (int h : active) {
      if (!net.directed() && h < g) continue;
      const double e = static_cast<double>(c.eta[g][h]);
      const double n = static_cast<double>(c.npairs[g][h]);
      out.log_lik += std::lgamma(hp.a + hp.b) - std::lgamma(hp.a) - std::lgamma(hp.b) +
                     std::lgamma(hp.a + e) + std::lgamma(hp.b + n - e) - std::lgamma(hp.a + hp.b + n);
    }
  }
  if (p.num_times() > 1) {
    for (int g : active) {
      double row = 0.0;
      double cells = 0.0;
      for (int h : active) {
        row += static_cast<double>(c.trans[g][h]);
        cells += std::lgamma(hp.delta + static_cast<double>(c.trans[g][h]));
      }
      out.log_prior += cells - std::lgamma(k * hp.delta + row) + std::lgamma(k * hp.delta) -
                       k * std::lgamma(hp.delta);
    }
    std::vector<double> later(p.capacity(), 0.0);
    for (int t = 1; t < p.num_times(); ++t)
      for (int i = 0; i < p.num_nodes(); ++i) later[p(t, i)] += 1.0;
    const double total_later = static_cast<double>(p.num_nodes()) * (p.num_times() - 1);
    for (int i = 0; i < p.num_nodes(); ++i) out.log_prior += std::log(later[p(0, i)] / total_later);
  } else {
    out.log_prior = -p.num_nodes() * std::log(k);
  }
  out.total = out.log_lik + out.log_prior;
  return out;
}

// Enumerates every labelling of a T x N slot matrix with `capacity` groups.
template <typename F>
void for_each_partition(int t, int n, int capacity, F&& visit) {
  const int slots = t * n;
  std::vector<int> labels(slots, 0);
  while (true) {
    visit(Partition(labels, t, n, capacity));
    int k = 0;
    while (k < slots && ++labels[k] == capacity) labels[k++] = 0;
    if (k == slots) break;
  }
}

}  // namespace oracle
