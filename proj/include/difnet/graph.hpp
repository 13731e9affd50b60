#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "difnet/sparse.hpp"
#include "difnet/tensor.hpp"

namespace difnet {

struct Edge {
  std::size_t a;
  std::size_t b;
  double weight = 1.0;
};

// Undirected attributed graph G = (V, E, w, x, y).
//
// Edges are stored once per unordered pair with a <= b. Features X [n × d_x]
// and one-hot labels Y [n × d_y] are constant tensors.
class Graph {
 public:
  Graph() = default;

  // Validates endpoints and one-hot rows, merges duplicate and reversed edges.
  Graph(std::vector<std::string> node_ids, std::vector<Edge> edges, Tensor features,
        std::vector<std::size_t> labels, std::vector<std::string> class_names);

  std::size_t node_count() const noexcept { return node_ids_.size(); }
  std::size_t feature_dim() const { return features_.cols(); }
  std::size_t class_count() const noexcept { return class_names_.size(); }

  const std::vector<std::string>& node_ids() const noexcept { return node_ids_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Tensor& features() const noexcept { return features_; }
  const Tensor& labels() const noexcept { return labels_; }
  const std::vector<std::size_t>& label_indices() const noexcept { return label_idx_; }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }

  // Sorted neighbour list; contains i itself only for a self-loop edge.
  const std::vector<std::size_t>& adjacent(std::size_t i) const { return adjacency_.at(i); }

 private:
  std::vector<std::string> node_ids_;
  std::vector<Edge> edges_;
  Tensor features_;
  Tensor labels_;
  std::vector<std::size_t> label_idx_;
  std::vector<std::string> class_names_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

struct LoadStats {
  std::size_t skipped_citations = 0;
};

// Reads a `.content` file (`<id> <features...> <label>` per line) and a
// `.cites` file (`<target-id> <source-id>` per line). Feature rows are
// L1-normalised unless all zero; classes are numbered in first-appearance
// order; citations naming unknown ids are skipped and counted.
Graph load_citation_dataset(const std::filesystem::path& content_path, const std::filesystem::path& cites_path,
                            LoadStats* stats = nullptr);

// M(i,j) = 1 iff i and j are adjacent or i == j.
DiffusionMask build_mask(const Graph& g);

std::vector<std::size_t> neighbor_set(const Graph& g, std::size_t i);

// D̃^{-1/2} (A + I) D̃^{-1/2} over the binary symmetrised adjacency A. Self-loop
// edges do not add to the diagonal beyond the identity.
using NormalizedAdjacency = SparseMatrix;
NormalizedAdjacency normalized_adjacency(const Graph& g);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

// Test: the final test_size nodes. Train: the first per_class_train nodes of
// every class, in node order, outside the test block. Validation: the first
// val_size remaining nodes in node order.
Split standard_split(const Graph& g, std::size_t per_class_train, std::size_t val_size, std::size_t test_size);

}  // namespace difnet
