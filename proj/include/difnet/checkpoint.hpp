#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <vector>

#include "difnet/model.hpp"

namespace difnet {

// A model's configuration plus an ordered list of named weight matrices.
struct Checkpoint {
  ModelConfig config;
  std::size_t input_dim = 0;
  std::size_t classes = 0;
  std::vector<NamedTensor> tensors;  // independent copies
};

Checkpoint snapshot(const NodeClassifier& model);

// Rebuilds a model and copies the stored weights in by name. Missing names or
// mismatched shapes throw ShapeError.
std::unique_ptr<NodeClassifier> restore(const Checkpoint& ckpt);

// Line-oriented text format, version 1:
//
//   difnet-checkpoint 1
//   <key> <value>            (model, depth, hidden, gdu, residual, dropout,
//   ...                       seed, share_res, dense_limit, input_dim, classes)
//   tensors <count>
//   tensor <name> <rows> <cols>
//   <row values as C99 hex floats, space separated>   (one line per row)
//
// Hex floats make the round trip bitwise exact.
void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace difnet
