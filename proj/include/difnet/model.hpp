#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "difnet/diffusion.hpp"
#include "difnet/gdu.hpp"
#include "difnet/graph.hpp"
#include "difnet/rng.hpp"
#include "difnet/tape.hpp"

namespace difnet {

enum class ResidualKind { naive, raw, graph_naive, graph_raw };
enum class ModelKind { difnet, gcn };

std::string to_string(ResidualKind k);
std::string to_string(ModelKind k);
// Accepts both "graph-raw" and "graph_raw" spellings.
ResidualKind parse_residual_kind(const std::string& s);
ModelKind parse_model_kind(const std::string& s);

struct ModelConfig {
  ModelKind kind = ModelKind::difnet;
  std::size_t depth = 2;  // DifNet: diffusion+GDU layers. GCN: graph convolutions.
  std::size_t hidden = 16;
  GduVariant gdu = GduVariant::full;
  ResidualKind residual = ResidualKind::graph_raw;
  double dropout = 0.5;
  std::uint64_t seed = 0;
  bool share_residual_projection = true;  // simplified GDU only
  DiffusionOptions diffusion;

  // Throws ContractError on an invalid combination.
  void validate() const;
};

// Constant per-graph inputs of a forward pass. Owns the mask and adjacency,
// which taped operations reference, so it must outlive those tapes.
class GraphContext {
 public:
  explicit GraphContext(const Graph& g);
  GraphContext(Tensor features, DiffusionMask mask, NormalizedAdjacency adjacency);

  const Tensor& features() const noexcept { return features_; }
  const DiffusionMask& mask() const noexcept { return mask_; }
  const NormalizedAdjacency& adjacency() const noexcept { return adjacency_; }
  std::size_t node_count() const { return features_.rows(); }

 private:
  Tensor features_;
  DiffusionMask mask_;
  NormalizedAdjacency adjacency_;
};

// Common surface of DifNet and the GCN baseline, as used by the trainer.
class NodeClassifier {
 public:
  virtual ~NodeClassifier() = default;

  // Class probabilities Ŷ [n × d_y]. When training with a positive dropout
  // rate, dropout_rng must be provided.
  virtual Tensor forward(Tape& tape, const GraphContext& ctx, bool training,
                         CounterRng* dropout_rng = nullptr) const = 0;

  // Distinct trainable tensors in a stable order. A tensor shared between
  // layers appears once.
  virtual std::vector<NamedTensor> parameters() const = 0;

  virtual const ModelConfig& config() const = 0;
  virtual std::size_t input_dim() const = 0;
  virtual std::size_t class_count() const = 0;
};

// naive → H, raw → X_emb, graph_naive → Â·H, graph_raw → Â·X_emb.
Tensor compute_residual(Tape& tape, ResidualKind kind, const Tensor& x_emb, const Tensor& h,
                        const NormalizedAdjacency& adjacency);

struct DifNetParams {
  Tensor w_emb;  // [d_h × d_x]
  Tensor w_x;    // [d_h × d_h]
  std::vector<GduParamsFull> full_layers;
  std::vector<GduParamsSimplified> simplified_layers;
  Tensor w_fc;  // [d_y × d_h]
};

class DifNet final : public NodeClassifier {
 public:
  // Glorot-initialised from cfg.seed.
  DifNet(const ModelConfig& cfg, std::size_t input_dim, std::size_t classes);
  DifNet(const ModelConfig& cfg, DifNetParams params);

  Tensor forward(Tape& tape, const GraphContext& ctx, bool training, CounterRng* dropout_rng = nullptr) const override;
  std::vector<NamedTensor> parameters() const override;
  const ModelConfig& config() const override { return cfg_; }
  std::size_t input_dim() const override { return params_.w_emb.cols(); }
  std::size_t class_count() const override { return params_.w_fc.rows(); }

  const DifNetParams& params() const noexcept { return params_; }

 private:
  ModelConfig cfg_;
  DifNetParams params_;
};

std::unique_ptr<NodeClassifier> make_model(const ModelConfig& cfg, std::size_t input_dim, std::size_t classes);

// Summed cross-entropy over the given rows.
Tensor classification_loss(Tape& tape, const Tensor& probs, const Tensor& labels, std::span<const std::size_t> rows);

// Row-wise argmax; ties go to the lowest class index.
std::vector<std::size_t> predict(const Tensor& probs);

// Fraction of rows whose prediction equals the label. Empty rows → ContractError.
double accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> labels,
                std::span<const std::size_t> rows);

}  // namespace difnet
