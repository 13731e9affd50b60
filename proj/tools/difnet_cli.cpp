// Command-line front end: train, sweep, gradcheck, evaluate, plot.
//
// Exit codes: 0 success, 1 usage or validation error (including a failed
// gradient check), 2 runtime error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "difnet/checkpoint.hpp"
#include "difnet/datasets.hpp"
#include "difnet/error.hpp"
#include "difnet/gradient_suite.hpp"
#include "difnet/plot.hpp"
#include "difnet/trainer.hpp"

namespace {

using namespace difnet;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct ModelFlags {
  std::string dataset = "cora";
  std::string model = "difnet";
  std::size_t depth = 2;
  std::string gdu = "full";
  std::string residual = "graph-raw";
  std::optional<double> lr;
  std::size_t epochs = 1000;
  std::uint64_t seed = 0;
  std::size_t hidden = 16;
  double dropout = 0.5;
  double weight_decay = 5e-4;
  std::size_t dense_limit = DiffusionOptions{}.dense_node_limit;
};

void add_model_flags(CLI::App& cmd, ModelFlags& f, bool sweep) {
  cmd.add_option("--dataset", f.dataset, "Dataset name")
      ->check(CLI::IsMember(known_datasets()))
      ->capture_default_str();
  if (sweep) {
    cmd.add_option("--model", f.model, "Model to sweep")
        ->check(CLI::IsMember({"difnet", "gcn", "both"}))
        ->capture_default_str();
  } else {
    cmd.add_option("--model", f.model, "Model")->check(CLI::IsMember({"difnet", "gcn"}))->capture_default_str();
    cmd.add_option("--depth", f.depth, "Number of layers")->check(CLI::PositiveNumber)->capture_default_str();
  }
  cmd.add_option("--gdu", f.gdu, "GDU variant")->check(CLI::IsMember({"full", "simplified"}))->capture_default_str();
  cmd.add_option("--residual", f.residual, "Graph residual term")
      ->check(CLI::IsMember({"naive", "raw", "graph-naive", "graph-raw"}))
      ->capture_default_str();
  cmd.add_option("--lr", f.lr, "Learning rate (default 0.01, 0.005 on pubmed)")->check(CLI::PositiveNumber);
  cmd.add_option("--epochs", f.epochs, "Maximum epochs")->check(CLI::NonNegativeNumber)->capture_default_str();
  cmd.add_option("--seed", f.seed, "Seed for initialisation and dropout")->capture_default_str();
  cmd.add_option("--hidden", f.hidden, "Hidden size")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--dropout", f.dropout, "Dropout rate")->check(CLI::Range(0.0, 0.999))->capture_default_str();
  cmd.add_option("--weight-decay", f.weight_decay, "L2 weight decay")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd.add_option("--dense-limit", f.dense_limit, "Largest graph diffused with the dense kernel")
      ->capture_default_str();
}

TrainConfig to_config(const ModelFlags& f) {
  TrainConfig cfg = TrainConfig::defaults_for(f.dataset);
  if (f.lr) cfg.learning_rate = *f.lr;
  cfg.max_epochs = f.epochs;
  cfg.weight_decay = f.weight_decay;
  cfg.model.kind = parse_model_kind(f.model == "both" ? "difnet" : f.model);
  cfg.model.depth = f.depth;
  cfg.model.hidden = f.hidden;
  cfg.model.gdu = parse_gdu_variant(f.gdu);
  cfg.model.residual = parse_residual_kind(f.residual);
  cfg.model.dropout = f.dropout;
  cfg.model.seed = f.seed;
  cfg.model.diffusion.dense_node_limit = f.dense_limit;
  return cfg;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

int run_train(const ModelFlags& f, const std::string& out_path, const std::string& ckpt_path) {
  TrainConfig cfg = to_config(f);
  cfg.model.validate();
  const Graph g = load_dataset(f.dataset, data_root());
  const Split split = default_split(f.dataset, g);
  const TrainResult r = train(cfg, g, split);

  auto out = open_out(out_path);
  write_metrics_csv(out, r.report);
  if (!ckpt_path.empty()) save_checkpoint(ckpt_path, r.best);

  std::printf("epochs=%zu best_val_epoch=%zu val_acc=%.4f test_acc=%.4f seconds=%.2f\n", r.report.epochs.size(),
              r.report.best_val_epoch, r.report.best_val_acc, r.report.test_acc_at_best_val,
              r.report.wall_clock_seconds);
  return 0;
}

std::vector<std::size_t> parse_depths(const std::string& text) {
  std::vector<std::size_t> depths;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || v == 0) throw ContractError("bad depth '" + tok + "' in --depths");
    depths.push_back(v);
  }
  if (depths.empty()) throw ContractError("--depths is empty");
  return depths;
}

int run_sweep(const ModelFlags& f, const std::string& depths_text, const std::string& out_path,
              std::size_t workers) {
  const auto depths = parse_depths(depths_text);
  const Graph g = load_dataset(f.dataset, data_root());
  const Split split = default_split(f.dataset, g);

  std::vector<std::string> models = f.model == "both" ? std::vector<std::string>{"difnet", "gcn"}
                                                      : std::vector<std::string>{f.model};
  std::vector<SweepRow> rows;
  for (const auto& m : models) {
    TrainConfig cfg = to_config(f);
    cfg.model.kind = parse_model_kind(m);
    for (std::size_t depth : depths) {
      cfg.model.depth = depth;
      cfg.model.validate();
    }
    auto part = depth_sweep(cfg, g, split, depths, workers);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  auto out = open_out(out_path);
  write_sweep_csv(out, rows);
  write_sweep_csv(std::cout, rows);
  return 0;
}

int run_gradcheck() {
  bool ok = true;
  for (const auto& c : run_gradient_suite()) {
    std::printf("%-28s max_rel_error=%.3e noise_ratio=%.2f %s\n", c.name.c_str(), c.max_rel_error,
                c.max_noise_ratio, c.passed() ? "ok" : c.precision_limited() ? "FAIL (within rounding noise)" : "FAIL");
    ok = ok && c.passed();
  }
  std::printf("gradcheck %s (tolerance %.0e)\n", ok ? "passed" : "FAILED", kGradCheckTolerance);
  return ok ? 0 : kExitValidation;
}

int run_evaluate(const std::string& ckpt_path, const std::string& dataset, const std::string& which) {
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  const Graph g = load_dataset(dataset, data_root());
  const Split split = default_split(dataset, g);
  const auto& idx = which == "train" ? split.train : which == "val" ? split.val : split.test;
  std::printf("%s_acc=%.4f\n", which.c_str(), evaluate(ckpt, g, idx));
  return 0;
}

int run_plot(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open " + in_path);
  const Chart chart = chart_from_csv(in);
  auto out = open_out(out_path);
  write_svg(out, chart);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DifNet: gated diffusive graph neural networks"};
  app.require_subcommand(1);

  ModelFlags train_flags;
  std::string train_out = "metrics.csv", train_ckpt;
  auto* train_cmd = app.add_subcommand("train", "Train one model and write per-epoch metrics");
  add_model_flags(*train_cmd, train_flags, false);
  train_cmd->add_option("--out", train_out, "Metrics CSV path")->capture_default_str();
  train_cmd->add_option("--checkpoint", train_ckpt, "Write the best-validation parameters here");

  ModelFlags sweep_flags;
  sweep_flags.model = "both";
  std::string depths = "2,10,20,30,40,50", sweep_out = "sweep.csv";
  std::size_t workers = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "Train across depths and write model,depth,accuracy,seconds");
  add_model_flags(*sweep_cmd, sweep_flags, true);
  sweep_cmd->add_option("--depths", depths, "Comma-separated depths")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Sweep CSV path")->capture_default_str();
  sweep_cmd->add_option("--workers", workers, "Parallel training runs")->check(CLI::PositiveNumber)->capture_default_str();

  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every gradient");

  std::string eval_ckpt, eval_dataset = "cora", eval_split = "test";
  auto* eval_cmd = app.add_subcommand("evaluate", "Accuracy of a checkpoint on a dataset split");
  eval_cmd->add_option("--checkpoint", eval_ckpt, "Checkpoint path")->required();
  eval_cmd->add_option("--dataset", eval_dataset, "Dataset name")
      ->check(CLI::IsMember(known_datasets()))
      ->capture_default_str();
  eval_cmd->add_option("--split", eval_split, "train, val or test")
      ->check(CLI::IsMember({"train", "val", "test"}))
      ->capture_default_str();

  std::string plot_in, plot_out = "plot.svg";
  auto* plot_cmd = app.add_subcommand("plot", "Render a metrics or sweep CSV as an SVG line chart");
  plot_cmd->add_option("--input", plot_in, "Metrics or sweep CSV")->required();
  plot_cmd->add_option("--out", plot_out, "SVG path")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*train_cmd) return run_train(train_flags, train_out, train_ckpt);
    if (*sweep_cmd) return run_sweep(sweep_flags, depths, sweep_out, workers);
    if (*grad_cmd) return run_gradcheck();
    if (*eval_cmd) return run_evaluate(eval_ckpt, eval_dataset, eval_split);
    if (*plot_cmd) return run_plot(plot_in, plot_out);
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SplitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitValidation;
}
