#include "difnet/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "difnet/error.hpp"

namespace difnet {
namespace {

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shapes " + to_string(a.shape()) + " and " + to_string(b.shape()) +
                     " differ");
  }
}

void check_finite(const char* op, std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericError(std::string(op) + " produced a non-finite value");
  }
}

double logistic(double x) {
  // Split form avoids exp overflow for large |x|.
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

void accumulate_grad(const Tensor& t, std::span<const double> g) {
  if (!t.requires_grad()) return;
  auto& s = t.storage();
  if (s.grad.empty()) s.grad.assign(s.value.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) s.grad[i] += g[i];
}

Tensor Tape::make_output(Shape shape, std::initializer_list<const Tensor*> inputs) {
  bool rg = false;
  for (const Tensor* t : inputs) rg = rg || t->requires_grad();
  Tensor out(shape.rows, shape.cols, rg);
  out.impl_->leaf = false;
  return out;
}

void Tape::record(const char* op, const Tensor& out, std::function<void()> rule) {
  check_finite(op, out.values());
  nodes_.push_back(Node{op, out.impl_, out.requires_grad() ? std::move(rule) : std::function<void()>{}});
}

Tensor Tape::matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions of " + to_string(a.shape()) + " and " + to_string(b.shape()) +
                     " do not match");
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Tensor out = make_output({m, n}, {&a, &b});
  {
    auto av = a.values();
    auto bv = b.values();
    auto ov = out.mutable_values();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t p = 0; p < k; ++p) {
        const double x = av[i * k + p];
        if (x == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) ov[i * n + j] += x * bv[p * n + j];
      }
  }
  record("matmul", out, [a, b, out, m, k, n] {
    const auto& g = out.storage().grad;
    if (a.requires_grad()) {
      std::vector<double> ga(m * k, 0.0);
      auto bv = b.values();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double gij = g[i * n + j];
          if (gij == 0.0) continue;
          for (std::size_t p = 0; p < k; ++p) ga[i * k + p] += gij * bv[p * n + j];
        }
      accumulate_grad(a, ga);
    }
    if (b.requires_grad()) {
      std::vector<double> gb(k * n, 0.0);
      auto av = a.values();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double x = av[i * k + p];
          if (x == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) gb[p * n + j] += x * g[i * n + j];
        }
      accumulate_grad(b, gb);
    }
  });
  return out;
}

Tensor Tape::matmul_nt(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_nt: inner dimensions of " + to_string(a.shape()) + " and transposed " +
                     to_string(b.shape()) + " do not match");
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  Tensor out = make_output({m, n}, {&a, &b});
  {
    auto av = a.values();
    auto bv = b.values();
    std::vector<double> bt(k * n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < k; ++p) bt[p * n + j] = bv[j * k + p];
    auto ov = out.mutable_values();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t p = 0; p < k; ++p) {
        const double x = av[i * k + p];
        if (x == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) ov[i * n + j] += x * bt[p * n + j];
      }
  }
  record("matmul_nt", out, [a, b, out, m, k, n] {
    const auto& g = out.storage().grad;
    if (a.requires_grad()) {
      std::vector<double> ga(m * k, 0.0);
      auto bv = b.values();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const double gij = g[i * n + j];
          if (gij == 0.0) continue;
          for (std::size_t p = 0; p < k; ++p) ga[i * k + p] += gij * bv[j * k + p];
        }
      accumulate_grad(a, ga);
    }
    if (b.requires_grad()) {
      // Accumulate transposed, then scatter back to [n × k].
      std::vector<double> gbt(k * n, 0.0);
      auto av = a.values();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double x = av[i * k + p];
          if (x == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) gbt[p * n + j] += x * g[i * n + j];
        }
      std::vector<double> gb(n * k);
      for (std::size_t p = 0; p < k; ++p)
        for (std::size_t j = 0; j < n; ++j) gb[j * k + p] = gbt[p * n + j];
      accumulate_grad(b, gb);
    }
  });
  return out;
}

Tensor Tape::ewise(EwiseOp op, const Tensor& a, const Tensor& b) {
  require_same_shape("ewise", a, b);
  Tensor out = make_output(a.shape(), {&a, &b});
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.mutable_values();
  for (std::size_t i = 0; i < ov.size(); ++i) {
    switch (op) {
      case EwiseOp::add: ov[i] = av[i] + bv[i]; break;
      case EwiseOp::sub: ov[i] = av[i] - bv[i]; break;
      case EwiseOp::mul: ov[i] = av[i] * bv[i]; break;
    }
  }
  record("ewise", out, [op, a, b, out] {
    const auto& g = out.storage().grad;
    switch (op) {
      case EwiseOp::add:
        accumulate_grad(a, g);
        accumulate_grad(b, g);
        break;
      case EwiseOp::sub: {
        accumulate_grad(a, g);
        if (b.requires_grad()) {
          std::vector<double> nb(g.size());
          for (std::size_t i = 0; i < g.size(); ++i) nb[i] = -g[i];
          accumulate_grad(b, nb);
        }
        break;
      }
      case EwiseOp::mul: {
        auto av = a.values();
        auto bv = b.values();
        std::vector<double> tmp(g.size());
        if (a.requires_grad()) {
          for (std::size_t i = 0; i < g.size(); ++i) tmp[i] = g[i] * bv[i];
          accumulate_grad(a, tmp);
        }
        if (b.requires_grad()) {
          for (std::size_t i = 0; i < g.size(); ++i) tmp[i] = g[i] * av[i];
          accumulate_grad(b, tmp);
        }
        break;
      }
    }
  });
  return out;
}

Tensor Tape::scale(const Tensor& a, double s) {
  Tensor out = make_output(a.shape(), {&a});
  auto av = a.values();
  auto ov = out.mutable_values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = s * av[i];
  record("scale", out, [a, out, s] {
    const auto& g = out.storage().grad;
    std::vector<double> ga(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] = s * g[i];
    accumulate_grad(a, ga);
  });
  return out;
}

Tensor Tape::one_minus(const Tensor& a) {
  Tensor out = make_output(a.shape(), {&a});
  auto av = a.values();
  auto ov = out.mutable_values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = 1.0 - av[i];
  record("one_minus", out, [a, out] {
    const auto& g = out.storage().grad;
    std::vector<double> ga(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] = -g[i];
    accumulate_grad(a, ga);
  });
  return out;
}

Tensor Tape::concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no parts");
  const std::size_t m = parts.front().rows();
  std::size_t total = 0;
  bool rg = false;
  for (const auto& p : parts) {
    if (p.rows() != m) {
      throw ShapeError("concat_cols: row counts " + std::to_string(m) + " and " + std::to_string(p.rows()) +
                       " differ");
    }
    total += p.cols();
    rg = rg || p.requires_grad();
  }
  Tensor out(m, total, rg);
  out.impl_->leaf = false;
  auto ov = out.mutable_values();
  std::size_t offset = 0;
  for (const auto& p : parts) {
    auto pv = p.values();
    const std::size_t c = p.cols();
    for (std::size_t i = 0; i < m; ++i)
      std::copy_n(pv.begin() + static_cast<std::ptrdiff_t>(i * c), c,
                  ov.begin() + static_cast<std::ptrdiff_t>(i * total + offset));
    offset += c;
  }
  std::vector<Tensor> kept(parts.begin(), parts.end());
  record("concat_cols", out, [kept = std::move(kept), out, m, total] {
    const auto& g = out.storage().grad;
    std::size_t offset = 0;
    for (const auto& p : kept) {
      const std::size_t c = p.cols();
      if (p.requires_grad()) {
        std::vector<double> gp(m * c);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < c; ++j) gp[i * c + j] = g[i * total + offset + j];
        accumulate_grad(p, gp);
      }
      offset += c;
    }
  });
  return out;
}

Tensor Tape::activation(Activation kind, const Tensor& a) {
  Tensor out = make_output(a.shape(), {&a});
  auto av = a.values();
  auto ov = out.mutable_values();
  for (std::size_t i = 0; i < ov.size(); ++i) {
    switch (kind) {
      case Activation::sigmoid: ov[i] = logistic(av[i]); break;
      case Activation::tanh: ov[i] = std::tanh(av[i]); break;
      case Activation::relu: ov[i] = av[i] > 0.0 ? av[i] : 0.0; break;
    }
  }
  record("activation", out, [kind, a, out] {
    const auto& g = out.storage().grad;
    auto yv = out.values();
    auto av = a.values();
    std::vector<double> ga(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      switch (kind) {
        case Activation::sigmoid: ga[i] = g[i] * yv[i] * (1.0 - yv[i]); break;
        case Activation::tanh: ga[i] = g[i] * (1.0 - yv[i] * yv[i]); break;
        case Activation::relu: ga[i] = av[i] > 0.0 ? g[i] : 0.0; break;
      }
    }
    accumulate_grad(a, ga);
  });
  return out;
}

Tensor Tape::softmax_rows(const Tensor& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (n == 0) throw ShapeError("softmax_rows: zero columns");
  Tensor out = make_output(a.shape(), {&a});
  auto av = a.values();
  auto ov = out.mutable_values();
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = av.data() + i * n;
    const double mx = *std::max_element(row, row + n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += ov[i * n + j] = std::exp(row[j] - mx);
    for (std::size_t j = 0; j < n; ++j) ov[i * n + j] /= total;
  }
  record("softmax_rows", out, [a, out, m, n] {
    const auto& g = out.storage().grad;
    auto p = out.values();
    std::vector<double> ga(m * n);
    for (std::size_t i = 0; i < m; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) dot += p[i * n + j] * g[i * n + j];
      for (std::size_t j = 0; j < n; ++j) ga[i * n + j] = p[i * n + j] * (g[i * n + j] - dot);
    }
    accumulate_grad(a, ga);
  });
  return out;
}

Tensor Tape::masked_softmax_rows(const Tensor& scores, const DiffusionMask& mask) {
  const std::size_t n = mask.size();
  if (scores.rows() != n || scores.cols() != n) {
    throw ShapeError("masked_softmax_rows: scores " + to_string(scores.shape()) + " vs mask " +
                     to_string(Shape{n, n}));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mask.row(i).empty()) throw ContractError("masked_softmax_rows: mask row " + std::to_string(i) + " is empty");
  }
  Tensor out = make_output(scores.shape(), {&scores});
  auto sv = scores.values();
  auto ov = out.mutable_values();
  for (std::size_t i = 0; i < n; ++i) {
    auto support = mask.row(i);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j : support) mx = std::max(mx, sv[i * n + j]);
    double total = 0.0;
    for (std::size_t j : support) total += ov[i * n + j] = std::exp(sv[i * n + j] - mx);
    for (std::size_t j : support) ov[i * n + j] /= total;
  }
  record("masked_softmax_rows", out, [&mask, scores, out, n] {
    const auto& g = out.storage().grad;
    auto p = out.values();
    std::vector<double> gs(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j : mask.row(i)) dot += p[i * n + j] * g[i * n + j];
      for (std::size_t j : mask.row(i)) gs[i * n + j] = p[i * n + j] * (g[i * n + j] - dot);
    }
    accumulate_grad(scores, gs);
  });
  return out;
}

Tensor Tape::sparse_matmul(const SparseMatrix& s, const Tensor& a) {
  if (s.cols() != a.rows()) {
    throw ShapeError("sparse_matmul: " + to_string(Shape{s.rows(), s.cols()}) + " by " + to_string(a.shape()));
  }
  const std::size_t n = a.cols();
  Tensor out = make_output({s.rows(), n}, {&a});
  auto av = a.values();
  auto ov = out.mutable_values();
  for (std::size_t r = 0; r < s.rows(); ++r) {
    auto cs = s.row_cols(r);
    auto vs = s.row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k)
      for (std::size_t j = 0; j < n; ++j) ov[r * n + j] += vs[k] * av[cs[k] * n + j];
  }
  record("sparse_matmul", out, [&s, a, out, n] {
    const auto& g = out.storage().grad;
    std::vector<double> ga(a.size(), 0.0);
    for (std::size_t r = 0; r < s.rows(); ++r) {
      auto cs = s.row_cols(r);
      auto vs = s.row_values(r);
      for (std::size_t k = 0; k < cs.size(); ++k)
        for (std::size_t j = 0; j < n; ++j) ga[cs[k] * n + j] += vs[k] * g[r * n + j];
    }
    accumulate_grad(a, ga);
  });
  return out;
}

Tensor Tape::masked_self_attention(const Tensor& h, const DiffusionMask& mask, double score_scale) {
  const std::size_t n = h.rows(), d = h.cols();
  if (mask.size() != n) {
    throw ShapeError("masked_self_attention: states " + to_string(h.shape()) + " vs mask over " +
                     std::to_string(mask.size()) + " nodes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mask.row(i).empty()) {
      throw ContractError("masked_self_attention: mask row " + std::to_string(i) + " is empty");
    }
  }
  Tensor out = make_output(h.shape(), {&h});
  auto hv = h.values();
  auto zv = out.mutable_values();
  // Attention weights per support entry, in mask order.
  auto weights = std::make_shared<std::vector<double>>(mask.nnz());
  std::size_t base = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto support = mask.row(i);
    double* w = weights->data() + base;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < support.size(); ++k) {
      const std::size_t j = support[k];
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) s += hv[i * d + c] * hv[j * d + c];
      w[k] = s * score_scale;
      mx = std::max(mx, w[k]);
    }
    double total = 0.0;
    for (std::size_t k = 0; k < support.size(); ++k) total += w[k] = std::exp(w[k] - mx);
    for (std::size_t k = 0; k < support.size(); ++k) {
      w[k] /= total;
      const std::size_t j = support[k];
      for (std::size_t c = 0; c < d; ++c) zv[i * d + c] += w[k] * hv[j * d + c];
    }
    base += support.size();
  }
  record("masked_self_attention", out, [&mask, h, out, weights, n, d, score_scale] {
    const auto& g = out.storage().grad;
    auto hv = h.values();
    std::vector<double> gh(n * d, 0.0);
    std::vector<double> gp;
    std::size_t base = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto support = mask.row(i);
      const double* w = weights->data() + base;
      gp.assign(support.size(), 0.0);
      double dot = 0.0;
      for (std::size_t k = 0; k < support.size(); ++k) {
        const std::size_t j = support[k];
        for (std::size_t c = 0; c < d; ++c) {
          gp[k] += g[i * d + c] * hv[j * d + c];
          gh[j * d + c] += w[k] * g[i * d + c];
        }
        dot += w[k] * gp[k];
      }
      for (std::size_t k = 0; k < support.size(); ++k) {
        const double gs = score_scale * w[k] * (gp[k] - dot);
        if (gs == 0.0) continue;
        const std::size_t j = support[k];
        for (std::size_t c = 0; c < d; ++c) {
          gh[i * d + c] += gs * hv[j * d + c];
          gh[j * d + c] += gs * hv[i * d + c];
        }
      }
      base += support.size();
    }
    accumulate_grad(h, gh);
  });
  return out;
}

Tensor Tape::dropout(const Tensor& a, double rate, CounterRng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ContractError("dropout rate must lie in [0, 1)");
  Tensor out = make_output(a.shape(), {&a});
  auto keep = std::make_shared<std::vector<double>>(a.size());
  const double kept_scale = 1.0 / (1.0 - rate);
  for (double& k : *keep) k = rng.bernoulli(rate) ? 0.0 : kept_scale;
  auto av = a.values();
  auto ov = out.mutable_values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] * (*keep)[i];
  record("dropout", out, [a, out, keep] {
    const auto& g = out.storage().grad;
    std::vector<double> ga(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] = g[i] * (*keep)[i];
    accumulate_grad(a, ga);
  });
  return out;
}

Tensor Tape::sum(const Tensor& a) {
  Tensor out = make_output({1, 1}, {&a});
  double s = 0.0;
  for (double x : a.values()) s += x;
  out.mutable_values()[0] = s;
  record("sum", out, [a, out] {
    const double g = out.storage().grad[0];
    accumulate_grad(a, std::vector<double>(a.size(), g));
  });
  return out;
}

Tensor Tape::cross_entropy(const Tensor& probs, const Tensor& labels, std::span<const std::size_t> rows,
                           double floor) {
  require_same_shape("cross_entropy", probs, labels);
  if (rows.empty()) throw ContractError("cross_entropy: empty index set");
  const std::size_t c = probs.cols();
  for (std::size_t r : rows) {
    if (r >= probs.rows()) throw BoundsError("cross_entropy: row " + std::to_string(r) + " out of range");
  }
  Tensor out = make_output({1, 1}, {&probs});
  auto pv = probs.values();
  auto yv = labels.values();
  double loss = 0.0;
  for (std::size_t r : rows)
    for (std::size_t d = 0; d < c; ++d) {
      const double y = yv[r * c + d];
      if (y != 0.0) loss -= y * std::log(std::max(pv[r * c + d], floor));
    }
  out.mutable_values()[0] = loss;
  std::vector<std::size_t> kept(rows.begin(), rows.end());
  record("cross_entropy", out, [probs, labels, out, kept = std::move(kept), c, floor] {
    const double g = out.storage().grad[0];
    auto pv = probs.values();
    auto yv = labels.values();
    std::vector<double> gp(probs.size(), 0.0);
    for (std::size_t r : kept)
      for (std::size_t d = 0; d < c; ++d) {
        const double y = yv[r * c + d];
        const double p = pv[r * c + d];
        if (y != 0.0 && p > floor) gp[r * c + d] -= g * y / p;
      }
    accumulate_grad(probs, gp);
  });
  return out;
}

void Tape::backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw ContractError("backward: loss must be a 1x1 tensor");
  }
  auto it = std::find_if(nodes_.rbegin(), nodes_.rend(),
                         [&](const Node& n) { return n.output == loss.impl_; });
  if (it == nodes_.rend()) throw ContractError("backward: loss was not recorded on this tape");
  if (!loss.requires_grad()) return;

  for (auto& n : nodes_) n.output->grad.clear();
  loss.impl_->grad.assign(1, 1.0);
  for (; it != nodes_.rend(); ++it) {
    if (it->backward && !it->output->grad.empty()) it->backward();
  }
}

}  // namespace difnet
