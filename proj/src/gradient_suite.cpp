#include "difnet/gradient_suite.hpp"

#include <numeric>

#include "difnet/diffusion.hpp"
#include "difnet/gcn.hpp"
#include "difnet/gdu.hpp"
#include "difnet/gradcheck.hpp"
#include "difnet/model.hpp"
#include "difnet/synthetic.hpp"

namespace difnet {
namespace {

constexpr double kEps = 1e-6;

Tensor random_tensor(std::size_t rows, std::size_t cols, CounterRng& rng, bool trainable) {
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return Tensor(rows, cols, std::move(v), trainable);
}

GradSuiteCase run(const std::string& name, const ScalarObjective& f, std::vector<Tensor> params) {
  const auto r = grad_check_detailed(f, params, kEps);
  return {name, r.max_rel_error, r.worst_entry, r.max_noise_ratio};
}

std::vector<Tensor> tensors_of(const NodeClassifier& m) {
  std::vector<Tensor> out;
  for (const auto& p : m.parameters()) out.push_back(p.value);
  return out;
}

}  // namespace

std::vector<GradSuiteCase> run_gradient_suite(std::uint64_t seed) {
  CounterRng rng(seed, CounterRng::stream_id("gradient-suite"));
  std::vector<GradSuiteCase> cases;

  // Cells on a 3-row batch with trainable inputs, weighted output sum.
  constexpr std::size_t d = 4, rows = 3;
  {
    auto p = GduParamsFull::glorot(d, rng);
    CellInputs in{random_tensor(rows, d, rng, true), random_tensor(rows, d, rng, true),
                  random_tensor(rows, d, rng, true)};
    Tensor weights = random_tensor(rows, d, rng, false);
    cases.push_back(run(
        "gdu-full", [&](Tape& t) { return t.sum(t.mul(gdu_full(t, p, in), weights)); },
        {p.w_f, p.w_e, p.w_u, p.w_g, p.w_r, in.z, in.h, in.x_res}));
  }
  {
    auto p = GduParamsSimplified::glorot(d, rng);
    CellInputs in{random_tensor(rows, d, rng, true), random_tensor(rows, d, rng, true),
                  random_tensor(rows, d, rng, true)};
    Tensor weights = random_tensor(rows, d, rng, false);
    cases.push_back(run(
        "gdu-simplified", [&](Tape& t) { return t.sum(t.mul(gdu_simplified(t, p, in), weights)); },
        {p.w_u, p.w_u_res, p.w_g, p.w_f, p.w_e, in.z, in.h, in.x_res}));
  }

  const Graph g = make_random_graph(6, 0.5, 5, 3, seed);
  const GraphContext ctx(g);
  {
    Tensor h = random_tensor(6, d, rng, true);
    Tensor weights = random_tensor(6, d, rng, false);
    cases.push_back(run(
        "diffusion-dense", [&](Tape& t) { return t.sum(t.mul(diffuse_dense(t, h, ctx.mask()), weights)); }, {h}));
    cases.push_back(run(
        "diffusion-sparse", [&](Tape& t) { return t.sum(t.mul(diffuse_sparse(t, h, ctx.mask()), weights)); },
        {h}));
  }

  std::vector<std::size_t> all(g.node_count());
  std::iota(all.begin(), all.end(), 0);
  auto model_case = [&](const std::string& name, const ModelConfig& cfg) {
    auto model = make_model(cfg, g.feature_dim(), g.class_count());
    cases.push_back(run(
        name,
        [&](Tape& t) { return classification_loss(t, model->forward(t, ctx, false), g.labels(), all); },
        tensors_of(*model)));
  };

  ModelConfig cfg;
  cfg.depth = 3;
  cfg.hidden = d;
  cfg.dropout = 0.0;
  cfg.seed = seed;
  for (auto variant : {GduVariant::full, GduVariant::simplified}) {
    cfg.gdu = variant;
    cfg.diffusion.dense_node_limit = 1024;
    model_case("difnet-" + to_string(variant), cfg);
    cfg.diffusion.dense_node_limit = 0;
    model_case("difnet-" + to_string(variant) + "-sparse", cfg);
  }
  cfg.gdu = GduVariant::full;
  for (auto residual : {ResidualKind::naive, ResidualKind::raw, ResidualKind::graph_naive}) {
    cfg.residual = residual;
    model_case("difnet-residual-" + to_string(residual), cfg);
  }

  ModelConfig gcn;
  gcn.kind = ModelKind::gcn;
  gcn.depth = 3;
  gcn.hidden = d;
  gcn.dropout = 0.0;
  gcn.seed = seed;
  model_case("gcn-depth3", gcn);
  return cases;
}

}  // namespace difnet
