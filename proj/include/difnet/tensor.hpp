#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace difnet {

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const noexcept { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

namespace detail {
struct TensorStorage {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty until a gradient is first written
  bool requires_grad = false;
  bool leaf = true;
};
}  // namespace detail

// Dense row-major 2-D array of doubles with an optional gradient buffer.
//
// Tensor is a handle: copies alias the same storage, which is how a parameter
// is shared between layers and how the tape refers to its operands. Use
// clone() for an independent copy.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, bool requires_grad = false);
  Tensor(std::size_t rows, std::size_t cols, std::vector<double> values, bool requires_grad = false);

  static Tensor zeros(std::size_t rows, std::size_t cols) { return Tensor(rows, cols); }
  static Tensor filled(std::size_t rows, std::size_t cols, double v);
  // Convenience for tests and small literals: {{1,2},{3,4}}.
  static Tensor from_rows(const std::vector<std::vector<double>>& rows, bool requires_grad = false);

  bool defined() const noexcept { return static_cast<bool>(impl_); }
  Shape shape() const { return impl_->shape; }
  std::size_t rows() const { return impl_->shape.rows; }
  std::size_t cols() const { return impl_->shape.cols; }
  std::size_t size() const { return impl_->value.size(); }

  double operator()(std::size_t r, std::size_t c) const { return impl_->value[r * impl_->shape.cols + c]; }
  double item() const;

  std::span<const double> values() const { return impl_->value; }
  // Direct write access, used by optimizers and initializers between passes.
  std::span<double> mutable_values() { return impl_->value; }
  void set(std::size_t r, std::size_t c, double v) { impl_->value[r * impl_->shape.cols + c] = v; }

  bool requires_grad() const { return impl_->requires_grad; }
  bool is_leaf() const { return impl_->leaf; }
  bool has_grad() const { return !impl_->grad.empty(); }
  // Zeros when no gradient has been accumulated yet.
  std::vector<double> grad() const;
  std::span<double> mutable_grad();
  void zero_grad();

  Tensor clone() const;
  bool same_storage(const Tensor& other) const noexcept { return impl_ == other.impl_; }

  detail::TensorStorage& storage() const { return *impl_; }

 private:
  explicit Tensor(std::shared_ptr<detail::TensorStorage> impl) : impl_(std::move(impl)) {}
  friend class Tape;

  std::shared_ptr<detail::TensorStorage> impl_;
};

}  // namespace difnet
