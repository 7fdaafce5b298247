#pragma once

#include <cstdint>
#include <vector>

#include "greedyicl/network.hpp"
#include "greedyicl/partition.hpp"

namespace greedyicl {

/// Markovian SBM generator with an affiliation connection structure.
struct SimConfig {
  int num_nodes = 50;
  int num_times = 4;
  int num_groups = 4;
  double pi = 0.9;      // probability of keeping the group between frames
  double theta0 = 0.9;  // within-group connection probability
  double eps0 = 0.1;    // between-group connection probability
  double perturb_scale = 0.1;
  bool directed = false;
  std::uint64_t seed = 0;

  /// Throws ConfigError on out-of-range values or when K = 1 with pi < 1.
  void validate() const;
};

struct SimOutput {
  DynamicNetwork network;
  Partition truth;
  std::vector<std::vector<double>> theta_real;  // realized connection probabilities
  std::vector<std::vector<double>> pi_matrix;   // transition matrix
};

/// Draws a perturbed connection matrix, uniform initial labels, independent
/// Markov chains per node, then independent Bernoulli edges per frame.
SimOutput simulate(const SimConfig& cfg);

}  // namespace greedyicl
