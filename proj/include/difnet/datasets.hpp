#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "difnet/graph.hpp"

namespace difnet {

// Environment variable naming the directory that holds <name>.content and
// <name>.cites (directly or under <name>/).
inline constexpr const char* kDataRootEnv = "DIFNET_DATA_ROOT";

struct SplitSizes {
  std::size_t per_class_train;
  std::size_t val;
  std::size_t test;
};

// cora, citeseer and pubmed are read from disk; toy is a built-in 10-node
// two-cluster graph.
const std::vector<std::string>& known_datasets();
bool is_known_dataset(const std::string& name);

SplitSizes default_split_sizes(const std::string& name);

// $DIFNET_DATA_ROOT, or ./data when unset.
std::filesystem::path data_root();

// Locates the dataset's files under root; nullopt when absent.
struct DatasetFiles {
  std::filesystem::path content;
  std::filesystem::path cites;
};
std::optional<DatasetFiles> find_dataset_files(const std::string& name, const std::filesystem::path& root);

// Throws ContractError for an unknown name and DatasetError when the files
// are missing.
Graph load_dataset(const std::string& name, const std::filesystem::path& root);

Split default_split(const std::string& name, const Graph& g);

}  // namespace difnet
