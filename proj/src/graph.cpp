#include "difnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "difnet/error.hpp"

namespace difnet {

Graph::Graph(std::vector<std::string> node_ids, std::vector<Edge> edges, Tensor features,
             std::vector<std::size_t> labels, std::vector<std::string> class_names)
    : node_ids_(std::move(node_ids)),
      features_(std::move(features)),
      label_idx_(std::move(labels)),
      class_names_(std::move(class_names)) {
  const std::size_t n = node_ids_.size();
  if (features_.rows() != n) {
    throw ShapeError("graph: " + std::to_string(features_.rows()) + " feature rows for " + std::to_string(n) +
                     " nodes");
  }
  if (label_idx_.size() != n) throw ShapeError("graph: label count does not match node count");

  labels_ = Tensor(n, class_names_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (label_idx_[i] >= class_names_.size()) {
      throw BoundsError("graph: node " + std::to_string(i) + " has label " + std::to_string(label_idx_[i]) +
                        " outside " + std::to_string(class_names_.size()) + " classes");
    }
    labels_.set(i, label_idx_[i], 1.0);
  }

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto e : edges) {
    if (e.a >= n || e.b >= n) {
      throw BoundsError("graph: edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ") outside " +
                        std::to_string(n) + " nodes");
    }
    if (e.a > e.b) std::swap(e.a, e.b);
    if (seen.emplace(e.a, e.b).second) edges_.push_back(e);
  }

  adjacency_.assign(n, {});
  for (const auto& e : edges_) {
    adjacency_[e.a].push_back(e.b);
    if (e.a != e.b) adjacency_[e.b].push_back(e.a);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(std::move(t));
  return tokens;
}

std::string where(const std::filesystem::path& p, std::size_t line) {
  return p.string() + ":" + std::to_string(line);
}

}  // namespace

Graph load_citation_dataset(const std::filesystem::path& content_path, const std::filesystem::path& cites_path,
                            LoadStats* stats) {
  std::ifstream content(content_path);
  if (!content) throw DatasetError("cannot open " + content_path.string());
  std::ifstream cites(cites_path);
  if (!cites) throw DatasetError("cannot open " + cites_path.string());

  std::vector<std::string> ids;
  std::vector<double> features;
  std::vector<std::size_t> labels;
  std::vector<std::string> classes;
  std::unordered_map<std::string, std::size_t> index_of;
  std::unordered_map<std::string, std::size_t> class_of;
  std::size_t dim = 0;

  std::string line;
  for (std::size_t lineno = 1; std::getline(content, line); ++lineno) {
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 3) throw ParseError(where(content_path, lineno) + ": expected id, features and label");
    const std::size_t row_dim = tokens.size() - 2;
    if (ids.empty()) {
      dim = row_dim;
    } else if (row_dim != dim) {
      throw ParseError(where(content_path, lineno) + ": " + std::to_string(row_dim) + " features, expected " +
                       std::to_string(dim));
    }
    if (!index_of.emplace(tokens.front(), ids.size()).second) {
      throw ParseError(where(content_path, lineno) + ": duplicate node id " + tokens.front());
    }
    ids.push_back(tokens.front());

    const std::size_t base = features.size();
    double l1 = 0.0;
    for (std::size_t k = 1; k + 1 < tokens.size(); ++k) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(tokens[k], &used);
        if (used != tokens[k].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(where(content_path, lineno) + ": bad feature value '" + tokens[k] + "'");
      }
      features.push_back(v);
      l1 += std::abs(v);
    }
    if (l1 > 0.0)
      for (std::size_t k = base; k < features.size(); ++k) features[k] /= l1;

    auto [it, inserted] = class_of.emplace(tokens.back(), classes.size());
    if (inserted) classes.push_back(tokens.back());
    labels.push_back(it->second);
  }
  if (ids.empty()) throw DatasetError(content_path.string() + " contains no nodes");

  std::vector<Edge> edges;
  std::size_t skipped = 0;
  for (std::size_t lineno = 1; std::getline(cites, line); ++lineno) {
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError(where(cites_path, lineno) + ": expected two node ids");
    auto a = index_of.find(tokens[0]);
    auto b = index_of.find(tokens[1]);
    if (a == index_of.end() || b == index_of.end()) {
      ++skipped;
      continue;
    }
    edges.push_back({a->second, b->second, 1.0});
  }
  if (skipped > 0) {
    std::clog << "skipped " << skipped << " citation(s) with unknown ids in " << cites_path.string() << '\n';
  }
  if (stats) stats->skipped_citations = skipped;

  const std::size_t n = ids.size();
  return Graph(std::move(ids), std::move(edges), Tensor(n, dim, std::move(features)), std::move(labels),
               std::move(classes));
}

DiffusionMask build_mask(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::size_t>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i] = g.adjacent(i);
    rows[i].push_back(i);
  }
  return DiffusionMask(n, std::move(rows));
}

std::vector<std::size_t> neighbor_set(const Graph& g, std::size_t i) {
  if (i >= g.node_count()) {
    throw BoundsError("neighbor_set: node " + std::to_string(i) + " outside " + std::to_string(g.node_count()));
  }
  return g.adjacent(i);
}

NormalizedAdjacency normalized_adjacency(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> degree(n, 1.0);  // the added self-loop
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : g.adjacent(i))
      if (j != i) degree[i] += 1.0;

  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < n; ++i) {
    entries.push_back({i, i, 1.0 / degree[i]});
    for (std::size_t j : g.adjacent(i))
      if (j != i) entries.push_back({i, j, 1.0 / std::sqrt(degree[i] * degree[j])});
  }
  return SparseMatrix::from_triplets(n, n, std::move(entries));
}

Split standard_split(const Graph& g, std::size_t per_class_train, std::size_t val_size, std::size_t test_size) {
  const std::size_t n = g.node_count();
  if (per_class_train == 0) throw SplitError("split: per-class training count must be positive");
  if (test_size >= n) {
    throw SplitError("split: test size " + std::to_string(test_size) + " leaves no nodes of " + std::to_string(n));
  }
  const std::size_t pool = n - test_size;
  const auto& labels = g.label_indices();

  Split split;
  std::vector<std::size_t> taken(g.class_count(), 0);
  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < pool; ++i) {
    if (taken[labels[i]] < per_class_train) {
      ++taken[labels[i]];
      in_train[i] = true;
      split.train.push_back(i);
    }
  }
  for (std::size_t c = 0; c < taken.size(); ++c) {
    if (taken[c] < per_class_train) {
      throw SplitError("split: class '" + g.class_names()[c] + "' has only " + std::to_string(taken[c]) +
                       " nodes before the test block, " + std::to_string(per_class_train) + " requested");
    }
  }
  for (std::size_t i = 0; i < pool && split.val.size() < val_size; ++i)
    if (!in_train[i]) split.val.push_back(i);
  if (split.val.size() < val_size) {
    throw SplitError("split: only " + std::to_string(split.val.size()) + " nodes left for validation, " +
                     std::to_string(val_size) + " requested");
  }
  for (std::size_t i = pool; i < n; ++i) split.test.push_back(i);
  return split;
}

}  // namespace difnet
