#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "difnet/rng.hpp"
#include "difnet/sparse.hpp"
#include "difnet/tensor.hpp"

namespace difnet {

enum class EwiseOp { add, sub, mul };
enum class Activation { sigmoid, tanh, relu };

// Records operations on tensors and replays them backwards.
//
// Every operation returns a fresh non-leaf tensor. The result requires a
// gradient iff one of its inputs does; operations that feed nothing
// trainable are still computed but record no backward rule. All outputs are
// checked for NaN/Inf and a NumericError naming the operation is thrown.
//
// Leaves (parameters) accumulate gradients across backward() calls until
// zero_grad() is called on them. Intermediate gradients are reset at the
// start of every backward().
//
// Sparse operands and masks are captured by reference: they must outlive the
// last backward() on the tape.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  Tensor matmul(const Tensor& a, const Tensor& b);
  // a · bᵀ, the layout used for weight matrices stored as [out × in].
  Tensor matmul_nt(const Tensor& a, const Tensor& b);

  Tensor ewise(EwiseOp op, const Tensor& a, const Tensor& b);
  Tensor add(const Tensor& a, const Tensor& b) { return ewise(EwiseOp::add, a, b); }
  Tensor sub(const Tensor& a, const Tensor& b) { return ewise(EwiseOp::sub, a, b); }
  Tensor mul(const Tensor& a, const Tensor& b) { return ewise(EwiseOp::mul, a, b); }
  Tensor scale(const Tensor& a, double s);
  Tensor one_minus(const Tensor& a);

  Tensor concat_cols(std::span<const Tensor> parts);
  Tensor concat_cols(std::initializer_list<Tensor> parts) {
    return concat_cols(std::span<const Tensor>(parts.begin(), parts.size()));
  }

  Tensor activation(Activation kind, const Tensor& a);
  Tensor sigmoid(const Tensor& a) { return activation(Activation::sigmoid, a); }
  Tensor tanh(const Tensor& a) { return activation(Activation::tanh, a); }
  Tensor relu(const Tensor& a) { return activation(Activation::relu, a); }

  // Row-wise softmax with max subtraction.
  Tensor softmax_rows(const Tensor& a);

  // Row-wise softmax restricted to the mask's support; off-support entries are
  // exactly zero. Throws ContractError naming the first row with no support.
  Tensor masked_softmax_rows(const Tensor& scores, const DiffusionMask& mask);

  // s · a for a constant sparse s.
  Tensor sparse_matmul(const SparseMatrix& s, const Tensor& a);

  // masked_softmax_rows(score_scale · h·hᵀ, mask) · h, evaluated only on the
  // mask's support. Memory is O(nnz) instead of O(n²).
  Tensor masked_self_attention(const Tensor& h, const DiffusionMask& mask, double score_scale);

  // Inverted dropout: kept entries are scaled by 1/(1-rate).
  Tensor dropout(const Tensor& a, double rate, CounterRng& rng);

  Tensor sum(const Tensor& a);

  // Σ_{i∈rows} Σ_d −labels(i,d)·log(max(probs(i,d), floor)), as a 1×1 tensor.
  Tensor cross_entropy(const Tensor& probs, const Tensor& labels, std::span<const std::size_t> rows,
                       double floor = 1e-12);

  // Seeds d(loss)/d(loss)=1 and replays the tape backwards from the node that
  // produced loss. loss must be 1×1 and recorded on this tape.
  void backward(const Tensor& loss);

  std::size_t size() const noexcept { return nodes_.size(); }
  void clear() noexcept { nodes_.clear(); }

 private:
  struct Node {
    std::string op;
    std::shared_ptr<detail::TensorStorage> output;
    std::function<void()> backward;
  };

  Tensor make_output(Shape shape, std::initializer_list<const Tensor*> inputs);
  void record(const char* op, const Tensor& out, std::function<void()> rule);

  std::vector<Node> nodes_;
};

// Accumulates g into t's gradient buffer when t takes gradients.
void accumulate_grad(const Tensor& t, std::span<const double> g);

}  // namespace difnet
