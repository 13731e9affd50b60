#include "difnet/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "difnet/error.hpp"
#include "difnet/optimizer.hpp"

namespace difnet {

TrainConfig TrainConfig::defaults_for(const std::string& dataset) {
  TrainConfig cfg;
  cfg.dataset = dataset;
  if (dataset == "pubmed") cfg.learning_rate = 0.005;
  return cfg;
}

namespace {

struct Accuracies {
  double train, val, test;
};

Accuracies evaluate_all(const NodeClassifier& model, const GraphContext& ctx, const Graph& g, const Split& split) {
  Tape tape;
  const auto preds = predict(model.forward(tape, ctx, false));
  const auto& labels = g.label_indices();
  return {accuracy(preds, labels, split.train), accuracy(preds, labels, split.val),
          accuracy(preds, labels, split.test)};
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const Graph& g, const Split& split) {
  const auto start = std::chrono::steady_clock::now();
  if (split.train.empty() || split.val.empty() || split.test.empty()) {
    throw ContractError("train: split has an empty train, validation or test set");
  }

  const GraphContext ctx(g);
  auto model = make_model(cfg.model, g.feature_dim(), g.class_count());
  std::vector<Tensor> params;
  for (const auto& p : model->parameters()) params.push_back(p.value);
  Adam adam(params, {cfg.learning_rate, 0.9, 0.999, 1e-8, cfg.weight_decay});
  CounterRng dropout_rng(cfg.model.seed, CounterRng::stream_id("dropout"));
  const double inv_train = 1.0 / static_cast<double>(split.train.size());

  TrainResult result;
  auto& report = result.report;
  {
    const Accuracies acc = evaluate_all(*model, ctx, g, split);
    report.best_val_acc = acc.val;
    report.test_acc_at_best_val = acc.test;
    result.best = snapshot(*model);
  }

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    adam.zero_grad();
    double loss_value = 0.0;
    try {
      Tape tape;
      Tensor probs = model->forward(tape, ctx, true, &dropout_rng);
      Tensor loss = tape.scale(classification_loss(tape, probs, g.labels(), split.train), inv_train);
      loss_value = loss.item();
      tape.backward(loss);
    } catch (const NumericError& e) {
      throw TrainingError("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
    }
    if (!std::isfinite(loss_value)) throw TrainingError("training diverged at epoch " + std::to_string(epoch));
    adam.step();

    Accuracies acc{};
    try {
      acc = evaluate_all(*model, ctx, g, split);
    } catch (const NumericError& e) {
      throw TrainingError("training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
    }
    report.epochs.push_back({epoch, loss_value, acc.train, acc.val, acc.test});
    if (acc.val > report.best_val_acc) {
      report.best_val_acc = acc.val;
      report.best_val_epoch = epoch;
      report.test_acc_at_best_val = acc.test;
      result.best = snapshot(*model);
    }
  }

  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

double evaluate(const Checkpoint& ckpt, const Graph& g, std::span<const std::size_t> idx) {
  if (idx.empty()) throw ContractError("evaluate: empty index set");
  if (ckpt.input_dim != g.feature_dim() || ckpt.classes != g.class_count()) {
    throw ShapeError("evaluate: checkpoint expects " + std::to_string(ckpt.input_dim) + " features and " +
                     std::to_string(ckpt.classes) + " classes, graph has " + std::to_string(g.feature_dim()) +
                     " and " + std::to_string(g.class_count()));
  }
  auto model = restore(ckpt);
  const GraphContext ctx(g);
  Tape tape;
  return accuracy(predict(model->forward(tape, ctx, false)), g.label_indices(), idx);
}

std::vector<SweepRow> depth_sweep(const TrainConfig& tmpl, const Graph& g, const Split& split,
                                  std::span<const std::size_t> depths, std::size_t workers) {
  if (depths.empty()) throw ContractError("depth_sweep: no depths given");
  std::vector<SweepRow> rows(depths.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < depths.size(); i = next++) {
      try {
        TrainConfig cfg = tmpl;
        cfg.model.depth = depths[i];
        const TrainResult r = train(cfg, g, split);
        rows[i] = {cfg.model.kind, depths[i], r.report.test_acc_at_best_val, r.report.wall_clock_seconds};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  workers = std::max<std::size_t>(1, std::min(workers, depths.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_metrics_csv(std::ostream& out, const TrainReport& report) {
  out << "epoch,train_loss,train_acc,val_acc,test_acc\n";
  for (const auto& e : report.epochs) {
    out << e.epoch << ',' << fixed(e.train_loss, 6) << ',' << fixed(e.train_acc, 6) << ',' << fixed(e.val_acc, 6)
        << ',' << fixed(e.test_acc, 6) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "model,depth,accuracy,seconds\n";
  for (const auto& r : rows) {
    out << to_string(r.model) << ',' << r.depth << ',' << fixed(r.accuracy, 4) << ',' << fixed(r.seconds, 3) << '\n';
  }
}

}  // namespace difnet
