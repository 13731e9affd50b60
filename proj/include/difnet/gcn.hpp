#pragma once

#include <cstddef>
#include <vector>

#include "difnet/model.hpp"

namespace difnet {

// Vanilla graph convolutional network without bias terms.
//
//   H⁰ = X,  H^{k+1} = ReLU(Â · H^k · W_kᵀ),  Ŷ = softmax(Â · H^{K-1} · W_{K-1}ᵀ)
//
// Dropout is applied between layers during training.
class Gcn final : public NodeClassifier {
 public:
  Gcn(const ModelConfig& cfg, std::size_t input_dim, std::size_t classes);
  // weights[k] is [out × in]; first maps d_x, last produces d_y.
  Gcn(const ModelConfig& cfg, std::vector<Tensor> weights);

  Tensor forward(Tape& tape, const GraphContext& ctx, bool training, CounterRng* dropout_rng = nullptr) const override;
  std::vector<NamedTensor> parameters() const override;
  const ModelConfig& config() const override { return cfg_; }
  std::size_t input_dim() const override { return weights_.front().cols(); }
  std::size_t class_count() const override { return weights_.back().rows(); }

  const std::vector<Tensor>& weights() const noexcept { return weights_; }

 private:
  ModelConfig cfg_;
  std::vector<Tensor> weights_;
};

}  // namespace difnet
