#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "difnet/checkpoint.hpp"
#include "difnet/graph.hpp"
#include "difnet/model.hpp"

namespace difnet {

struct TrainConfig {
  std::string dataset = "cora";
  ModelConfig model;  // depth, hidden, GDU variant, residual, dropout, seed
  double learning_rate = 0.01;
  std::size_t max_epochs = 1000;
  double weight_decay = 5e-4;

  // Defaults for a dataset: learning rate 0.005 on pubmed, 0.01 elsewhere.
  static TrainConfig defaults_for(const std::string& dataset);
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t best_val_epoch = 0;  // 0 = the initial parameters
  double best_val_acc = 0.0;
  double test_acc_at_best_val = 0.0;
  double wall_clock_seconds = 0.0;
};

struct TrainResult {
  TrainReport report;
  Checkpoint best;  // parameters from best_val_epoch
};

// Full-graph Adam training of the configured model on the summed
// cross-entropy of the training nodes divided by their count, with coupled
// L2 weight decay on every weight. After each step the model is evaluated
// without dropout; the parameters with the highest validation accuracy
// (earliest on ties) are kept. Deterministic given (cfg, graph, split).
// Non-finite loss throws TrainingError naming the epoch.
TrainResult train(const TrainConfig& cfg, const Graph& g, const Split& split);

// Accuracy of a stored model over the given nodes.
double evaluate(const Checkpoint& ckpt, const Graph& g, std::span<const std::size_t> idx);

struct SweepRow {
  ModelKind model = ModelKind::difnet;
  std::size_t depth = 0;
  double accuracy = 0.0;  // test accuracy at the best validation epoch
  double seconds = 0.0;
};

// One independent training run per depth, all with the template's seed and
// the same split. Runs are spread over `workers` threads; rows come back in
// the order of `depths`.
std::vector<SweepRow> depth_sweep(const TrainConfig& tmpl, const Graph& g, const Split& split,
                                  std::span<const std::size_t> depths, std::size_t workers = 1);

// CSV with header epoch,train_loss,train_acc,val_acc,test_acc.
void write_metrics_csv(std::ostream& out, const TrainReport& report);
// CSV with header model,depth,accuracy,seconds.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace difnet
