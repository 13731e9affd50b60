#include "difnet/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "difnet/error.hpp"

namespace difnet {
namespace {

void check_shapes(const Tensor& h, const DiffusionMask& mask) {
  if (h.rows() != mask.size()) {
    throw ShapeError("diffuse: " + std::to_string(h.rows()) + " state rows for a mask over " +
                     std::to_string(mask.size()) + " nodes");
  }
  if (h.cols() == 0) throw ShapeError("diffuse: zero-width hidden states");
}

}  // namespace

Tensor diffuse(Tape& tape, const Tensor& h, const DiffusionMask& mask, const DiffusionOptions& opts) {
  return h.rows() > opts.dense_node_limit ? diffuse_sparse(tape, h, mask) : diffuse_dense(tape, h, mask);
}

Tensor diffuse_dense(Tape& tape, const Tensor& h, const DiffusionMask& mask) {
  check_shapes(h, mask);
  const double s = 1.0 / std::sqrt(static_cast<double>(h.cols()));
  Tensor scores = tape.scale(tape.matmul_nt(h, h), s);
  Tensor weights = tape.masked_softmax_rows(scores, mask);
  return tape.matmul(weights, h);
}

Tensor diffuse_sparse(Tape& tape, const Tensor& h, const DiffusionMask& mask) {
  check_shapes(h, mask);
  return tape.masked_self_attention(h, mask, 1.0 / std::sqrt(static_cast<double>(h.cols())));
}

std::vector<double> influence_weights(const Tensor& h, const DiffusionMask& mask, std::size_t i) {
  check_shapes(h, mask);
  if (i >= mask.size()) throw BoundsError("influence_weights: node " + std::to_string(i) + " out of range");
  const std::size_t d = h.cols();
  const double s = 1.0 / std::sqrt(static_cast<double>(d));

  std::vector<double> w(mask.size(), 0.0);
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t j : mask.row(i)) {
    double e = 0.0;
    for (std::size_t c = 0; c < d; ++c) e += h(j, c) * h(i, c);
    w[j] = e * s;
    mx = std::max(mx, w[j]);
  }
  double total = 0.0;
  for (std::size_t j : mask.row(i)) total += w[j] = std::exp(w[j] - mx);
  for (std::size_t j : mask.row(i)) w[j] /= total;
  return w;
}

}  // namespace difnet
