#include "difnet/synthetic.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "difnet/rng.hpp"

namespace difnet {
namespace {

std::vector<std::string> numbered_ids(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = "n" + std::to_string(i);
  return ids;
}

std::vector<std::string> numbered_classes(std::size_t c) {
  std::vector<std::string> names(c);
  for (std::size_t i = 0; i < c; ++i) names[i] = "c" + std::to_string(i);
  return names;
}

std::size_t below(CounterRng& rng, std::size_t n) {
  return static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n;
}

}  // namespace

Graph make_random_graph(std::size_t nodes, double edge_probability, std::size_t feature_dim, std::size_t classes,
                        std::uint64_t seed) {
  CounterRng rng(seed, CounterRng::stream_id("random-graph"));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes; ++i)
    for (std::size_t j = i + 1; j < nodes; ++j)
      if (rng.bernoulli(edge_probability)) edges.push_back({i, j, 1.0});
  std::vector<double> x(nodes * feature_dim);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  std::vector<std::size_t> labels(nodes);
  for (std::size_t i = 0; i < nodes; ++i) labels[i] = i < classes ? i : below(rng, classes);
  return Graph(numbered_ids(nodes), std::move(edges), Tensor(nodes, feature_dim, std::move(x)), std::move(labels),
               numbered_classes(classes));
}

Graph make_two_cluster_graph(std::size_t per_cluster, std::uint64_t seed) {
  CounterRng rng(seed, CounterRng::stream_id("two-cluster"));
  const std::size_t n = 2 * per_cluster;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; j += 2) edges.push_back({i, j, 1.0});  // same parity, same cluster
  edges.push_back({n - 2, n - 1, 1.0});                                       // bridge

  constexpr std::size_t dim = 4;
  std::vector<double> x(n * dim);
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = i % 2;
    for (std::size_t k = 0; k < dim; ++k) x[i * dim + k] = rng.uniform(0.0, 0.5);
    x[i * dim + labels[i]] += 1.0;
  }
  return Graph(numbered_ids(n), std::move(edges), Tensor(n, dim, std::move(x)), std::move(labels),
               numbered_classes(2));
}

Graph make_planted_partition(const PlantedPartitionOptions& o) {
  CounterRng rng(o.seed, CounterRng::stream_id("planted-partition"));
  const std::size_t n = o.nodes;

  std::vector<std::size_t> labels(n);
  std::vector<std::vector<std::size_t>> members(o.classes);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = i < o.classes ? i : below(rng, o.classes);
    members[labels[i]].push_back(i);
  }

  std::vector<Edge> edges;
  const auto target_edges = static_cast<std::size_t>(o.mean_degree * static_cast<double>(n) / 2.0);
  while (edges.size() < target_edges) {
    const std::size_t a = below(rng, n);
    std::size_t b = 0;
    if (rng.bernoulli(o.homophily)) {
      const auto& same = members[labels[a]];
      b = same[below(rng, same.size())];
    } else {
      b = below(rng, n);
    }
    if (a != b) edges.push_back({a, b, 1.0});
  }

  // Each class owns a contiguous block of the vocabulary.
  const std::size_t block = o.feature_dim / o.classes;
  std::vector<double> x(n * o.feature_dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = x.data() + i * o.feature_dim;
    for (std::size_t w = 0; w < o.words_per_node; ++w) {
      const std::size_t word = rng.bernoulli(o.topical_word_fraction) ? labels[i] * block + below(rng, block)
                                                                      : below(rng, o.feature_dim);
      row[word] = 1.0;
    }
    double l1 = 0.0;
    for (std::size_t k = 0; k < o.feature_dim; ++k) l1 += row[k];
    for (std::size_t k = 0; k < o.feature_dim; ++k) row[k] /= l1;
  }
  return Graph(numbered_ids(n), std::move(edges), Tensor(n, o.feature_dim, std::move(x)), std::move(labels),
               numbered_classes(o.classes));
}

}  // namespace difnet
