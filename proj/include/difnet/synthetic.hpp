#pragma once

#include <cstddef>
#include <cstdint>

#include "difnet/graph.hpp"

namespace difnet {

// Erdős–Rényi graph with dense uniform(-1,1) features and uniform labels.
Graph make_random_graph(std::size_t nodes, double edge_probability, std::size_t feature_dim, std::size_t classes,
                        std::uint64_t seed);

// Two densely connected clusters joined by a single bridge edge. Node order
// interleaves the clusters (0,1,0,1,...) and features carry a noisy
// cluster-indicator signal.
Graph make_two_cluster_graph(std::size_t per_cluster, std::uint64_t seed);

struct PlantedPartitionOptions {
  std::size_t nodes = 2708;
  std::size_t classes = 7;
  std::size_t feature_dim = 1433;
  double mean_degree = 3.9;
  double homophily = 0.81;  // fraction of edges inside a class
  std::size_t words_per_node = 18;
  double topical_word_fraction = 0.3;
  std::uint64_t seed = 1;
};

// Citation-network-shaped stochastic block model with sparse binary
// bag-of-words features. The defaults mirror Cora's size, degree and
// homophily; it is a stand-in for timing and smoke runs, not a benchmark.
Graph make_planted_partition(const PlantedPartitionOptions& opts);

}  // namespace difnet
