#include "difnet/model.hpp"

#include <algorithm>
#include <cmath>

#include "difnet/error.hpp"
#include "difnet/gcn.hpp"

namespace difnet {

std::string to_string(ResidualKind k) {
  switch (k) {
    case ResidualKind::naive: return "naive";
    case ResidualKind::raw: return "raw";
    case ResidualKind::graph_naive: return "graph-naive";
    case ResidualKind::graph_raw: return "graph-raw";
  }
  return "?";
}

std::string to_string(ModelKind k) { return k == ModelKind::difnet ? "difnet" : "gcn"; }

ResidualKind parse_residual_kind(const std::string& s) {
  if (s == "naive") return ResidualKind::naive;
  if (s == "raw") return ResidualKind::raw;
  if (s == "graph-naive" || s == "graph_naive") return ResidualKind::graph_naive;
  if (s == "graph-raw" || s == "graph_raw") return ResidualKind::graph_raw;
  throw ContractError("unknown residual kind '" + s + "'");
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "difnet") return ModelKind::difnet;
  if (s == "gcn") return ModelKind::gcn;
  throw ContractError("unknown model '" + s + "' (expected difnet or gcn)");
}

void ModelConfig::validate() const {
  if (hidden == 0) throw ContractError("hidden size must be at least 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ContractError("dropout rate must lie in [0, 1)");
  if (kind == ModelKind::difnet && depth < 1) throw ContractError("DifNet depth must be at least 1");
  if (kind == ModelKind::gcn && depth < 2) throw ContractError("GCN depth must be at least 2");
}

GraphContext::GraphContext(const Graph& g)
    : features_(g.features()), mask_(build_mask(g)), adjacency_(normalized_adjacency(g)) {}

GraphContext::GraphContext(Tensor features, DiffusionMask mask, NormalizedAdjacency adjacency)
    : features_(std::move(features)), mask_(std::move(mask)), adjacency_(std::move(adjacency)) {
  if (mask_.size() != features_.rows() || adjacency_.rows() != features_.rows() ||
      adjacency_.cols() != features_.rows()) {
    throw ShapeError("graph context: features, mask and adjacency disagree on node count");
  }
}

Tensor compute_residual(Tape& tape, ResidualKind kind, const Tensor& x_emb, const Tensor& h,
                        const NormalizedAdjacency& adjacency) {
  switch (kind) {
    case ResidualKind::naive: return h;
    case ResidualKind::raw: return x_emb;
    case ResidualKind::graph_naive: return tape.sparse_matmul(adjacency, h);
    case ResidualKind::graph_raw: return tape.sparse_matmul(adjacency, x_emb);
  }
  throw ContractError("unknown residual kind");
}

DifNet::DifNet(const ModelConfig& cfg, std::size_t input_dim, std::size_t classes) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.kind != ModelKind::difnet) throw ContractError("DifNet built from a non-DifNet config");
  CounterRng rng(cfg_.seed, CounterRng::stream_id("init"));
  const std::size_t d = cfg_.hidden;
  params_.w_emb = glorot_uniform(d, input_dim, rng);
  params_.w_x = glorot_uniform(d, d, rng);
  Tensor shared_res;
  for (std::size_t k = 0; k < cfg_.depth; ++k) {
    if (cfg_.gdu == GduVariant::full) {
      params_.full_layers.push_back(GduParamsFull::glorot(d, rng));
    } else {
      params_.simplified_layers.push_back(GduParamsSimplified::glorot(d, rng, shared_res));
      if (cfg_.share_residual_projection) shared_res = params_.simplified_layers.back().w_u_res;
    }
  }
  params_.w_fc = glorot_uniform(classes, d, rng);
}

DifNet::DifNet(const ModelConfig& cfg, DifNetParams params) : cfg_(cfg), params_(std::move(params)) {
  cfg_.validate();
  const std::size_t layers =
      cfg_.gdu == GduVariant::full ? params_.full_layers.size() : params_.simplified_layers.size();
  if (layers != cfg_.depth) {
    throw ShapeError("DifNet: " + std::to_string(layers) + " layer parameter sets for depth " +
                     std::to_string(cfg_.depth));
  }
  const std::size_t d = cfg_.hidden;
  if (params_.w_emb.rows() != d || params_.w_x.rows() != d || params_.w_x.cols() != d ||
      params_.w_fc.cols() != d) {
    throw ShapeError("DifNet: embedding, state or output weights do not match hidden size " + std::to_string(d));
  }
}

Tensor DifNet::forward(Tape& tape, const GraphContext& ctx, bool training, CounterRng* dropout_rng) const {
  if (ctx.features().cols() != input_dim()) {
    throw ShapeError("DifNet: features have " + std::to_string(ctx.features().cols()) + " columns, model expects " +
                     std::to_string(input_dim()));
  }
  const bool drop = training && cfg_.dropout > 0.0;
  if (drop && dropout_rng == nullptr) throw ContractError("DifNet: training with dropout needs a generator");

  Tensor x_emb = tape.matmul_nt(ctx.features(), params_.w_emb);
  if (drop) x_emb = tape.dropout(x_emb, cfg_.dropout, *dropout_rng);
  Tensor h = tape.matmul_nt(x_emb, params_.w_x);

  const bool state_dependent = cfg_.residual == ResidualKind::naive || cfg_.residual == ResidualKind::graph_naive;
  Tensor fixed_residual;
  if (!state_dependent) fixed_residual = compute_residual(tape, cfg_.residual, x_emb, h, ctx.adjacency());

  for (std::size_t k = 0; k < cfg_.depth; ++k) {
    try {
      CellInputs in;
      in.x_res = state_dependent ? compute_residual(tape, cfg_.residual, x_emb, h, ctx.adjacency()) : fixed_residual;
      in.z = diffuse(tape, h, ctx.mask(), cfg_.diffusion);
      in.h = h;
      h = cfg_.gdu == GduVariant::full ? gdu_full(tape, params_.full_layers[k], in)
                                       : gdu_simplified(tape, params_.simplified_layers[k], in);
      if (drop) h = tape.dropout(h, cfg_.dropout, *dropout_rng);
    } catch (const NumericError& e) {
      throw NumericError("DifNet layer " + std::to_string(k + 1) + ": " + e.what());
    }
  }
  return tape.softmax_rows(tape.matmul_nt(h, params_.w_fc));
}

std::vector<NamedTensor> DifNet::parameters() const {
  std::vector<NamedTensor> out{{"w_emb", params_.w_emb}, {"w_x", params_.w_x}};
  for (std::size_t k = 0; k < params_.full_layers.size(); ++k) {
    auto named = params_.full_layers[k].named("layer" + std::to_string(k) + ".");
    out.insert(out.end(), named.begin(), named.end());
  }
  for (std::size_t k = 0; k < params_.simplified_layers.size(); ++k) {
    const auto& layer = params_.simplified_layers[k];
    const bool shared_with_first = k > 0 && layer.w_u_res.same_storage(params_.simplified_layers[0].w_u_res);
    auto named = layer.named("layer" + std::to_string(k) + ".", !shared_with_first);
    out.insert(out.end(), named.begin(), named.end());
  }
  out.push_back({"w_fc", params_.w_fc});
  return out;
}

std::unique_ptr<NodeClassifier> make_model(const ModelConfig& cfg, std::size_t input_dim, std::size_t classes) {
  if (cfg.kind == ModelKind::gcn) return std::make_unique<Gcn>(cfg, input_dim, classes);
  return std::make_unique<DifNet>(cfg, input_dim, classes);
}

Tensor classification_loss(Tape& tape, const Tensor& probs, const Tensor& labels,
                           std::span<const std::size_t> rows) {
  return tape.cross_entropy(probs, labels, rows);
}

std::vector<std::size_t> predict(const Tensor& probs) {
  std::vector<std::size_t> out(probs.rows());
  auto v = probs.values();
  const std::size_t c = probs.cols();
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    // max_element returns the first maximum, which is the tie rule.
    const double* row = v.data() + i * c;
    out[i] = static_cast<std::size_t>(std::max_element(row, row + c) - row);
  }
  return out;
}

double accuracy(std::span<const std::size_t> predictions, std::span<const std::size_t> labels,
                std::span<const std::size_t> rows) {
  if (rows.empty()) throw ContractError("accuracy: empty index set");
  std::size_t correct = 0;
  for (std::size_t r : rows) {
    if (r >= predictions.size() || r >= labels.size()) throw BoundsError("accuracy: row index out of range");
    if (predictions[r] == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

}  // namespace difnet
