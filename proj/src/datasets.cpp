#include "difnet/datasets.hpp"

#include <algorithm>
#include <cstdlib>

#include "difnet/error.hpp"
#include "difnet/synthetic.hpp"

namespace difnet {

const std::vector<std::string>& known_datasets() {
  static const std::vector<std::string> names{"cora", "citeseer", "pubmed", "toy"};
  return names;
}

bool is_known_dataset(const std::string& name) {
  const auto& k = known_datasets();
  return std::find(k.begin(), k.end(), name) != k.end();
}

SplitSizes default_split_sizes(const std::string& name) {
  if (name == "toy") return {2, 2, 4};
  return {20, 500, 1000};
}

std::filesystem::path data_root() {
  const char* env = std::getenv(kDataRootEnv);
  return env != nullptr && *env != '\0' ? std::filesystem::path(env) : std::filesystem::path("data");
}

std::optional<DatasetFiles> find_dataset_files(const std::string& name, const std::filesystem::path& root) {
  for (const auto& dir : {root / name, root}) {
    DatasetFiles f{dir / (name + ".content"), dir / (name + ".cites")};
    if (std::filesystem::exists(f.content) && std::filesystem::exists(f.cites)) return f;
  }
  return std::nullopt;
}

Graph load_dataset(const std::string& name, const std::filesystem::path& root) {
  if (!is_known_dataset(name)) throw ContractError("unknown dataset '" + name + "'");
  if (name == "toy") return make_two_cluster_graph(5, 7);
  auto files = find_dataset_files(name, root);
  if (!files) {
    throw DatasetError("dataset '" + name + "' not found under " + root.string() + " (set " + kDataRootEnv + ")");
  }
  return load_citation_dataset(files->content, files->cites);
}

Split default_split(const std::string& name, const Graph& g) {
  const auto s = default_split_sizes(name);
  return standard_split(g, s.per_class_train, s.val, s.test);
}

}  // namespace difnet
