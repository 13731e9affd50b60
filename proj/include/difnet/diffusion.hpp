#pragma once

#include <cstddef>
#include <vector>

#include "difnet/sparse.hpp"
#include "difnet/tape.hpp"
#include "difnet/tensor.hpp"

namespace difnet {

struct DiffusionOptions {
  // Graphs with more nodes than this use the support-only kernel; smaller
  // ones materialise the n×n score matrix. Both compute the same function.
  std::size_t dense_node_limit = 1024;
};

// Attention-based neighbourhood diffusion.
//
//   Z = masked_softmax_rows(H·Hᵀ / √d_h, M) · H
//
// Queries, keys and values are the hidden states themselves, so the operator
// has no parameters and Z has the same width as H. Entries outside the mask
// are excluded from the softmax support rather than given score 0.
Tensor diffuse(Tape& tape, const Tensor& h, const DiffusionMask& mask, const DiffusionOptions& opts = {});

Tensor diffuse_dense(Tape& tape, const Tensor& h, const DiffusionMask& mask);
Tensor diffuse_sparse(Tape& tape, const Tensor& h, const DiffusionMask& mask);

// ω_i: the attention distribution of node i over all nodes, zero outside
// row i of the mask.
std::vector<double> influence_weights(const Tensor& h, const DiffusionMask& mask, std::size_t i);

}  // namespace difnet
