#include "difnet/gcn.hpp"

#include "difnet/error.hpp"

namespace difnet {

Gcn::Gcn(const ModelConfig& cfg, std::size_t input_dim, std::size_t classes) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.kind != ModelKind::gcn) throw ContractError("GCN built from a non-GCN config");
  CounterRng rng(cfg_.seed, CounterRng::stream_id("init"));
  for (std::size_t k = 0; k < cfg_.depth; ++k) {
    const std::size_t in = k == 0 ? input_dim : cfg_.hidden;
    const std::size_t out = k + 1 == cfg_.depth ? classes : cfg_.hidden;
    weights_.push_back(glorot_uniform(out, in, rng));
  }
}

Gcn::Gcn(const ModelConfig& cfg, std::vector<Tensor> weights) : cfg_(cfg), weights_(std::move(weights)) {
  cfg_.validate();
  if (weights_.size() != cfg_.depth) throw ShapeError("GCN: weight count does not match depth");
  for (std::size_t k = 1; k < weights_.size(); ++k) {
    if (weights_[k].cols() != weights_[k - 1].rows()) {
      throw ShapeError("GCN: layer " + std::to_string(k) + " expects width " + std::to_string(weights_[k].cols()) +
                       ", previous layer produces " + std::to_string(weights_[k - 1].rows()));
    }
  }
}

Tensor Gcn::forward(Tape& tape, const GraphContext& ctx, bool training, CounterRng* dropout_rng) const {
  if (ctx.features().cols() != input_dim()) {
    throw ShapeError("GCN: features have " + std::to_string(ctx.features().cols()) + " columns, model expects " +
                     std::to_string(input_dim()));
  }
  const bool drop = training && cfg_.dropout > 0.0;
  if (drop && dropout_rng == nullptr) throw ContractError("GCN: training with dropout needs a generator");

  Tensor h = ctx.features();
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    try {
      if (k > 0 && drop) h = tape.dropout(h, cfg_.dropout, *dropout_rng);
      h = tape.sparse_matmul(ctx.adjacency(), tape.matmul_nt(h, weights_[k]));
      if (k + 1 < weights_.size()) h = tape.relu(h);
    } catch (const NumericError& e) {
      throw NumericError("GCN layer " + std::to_string(k + 1) + ": " + e.what());
    }
  }
  return tape.softmax_rows(h);
}

std::vector<NamedTensor> Gcn::parameters() const {
  std::vector<NamedTensor> out;
  for (std::size_t k = 0; k < weights_.size(); ++k) out.push_back({"layer" + std::to_string(k) + ".w", weights_[k]});
  return out;
}

}  // namespace difnet
