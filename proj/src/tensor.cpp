#include "difnet/tensor.hpp"

#include <algorithm>

#include "difnet/error.hpp"

namespace difnet {

std::string to_string(const Shape& s) { return std::to_string(s.rows) + "x" + std::to_string(s.cols); }

Tensor::Tensor(std::size_t rows, std::size_t cols, bool requires_grad)
    : Tensor(rows, cols, std::vector<double>(rows * cols, 0.0), requires_grad) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> values, bool requires_grad)
    : impl_(std::make_shared<detail::TensorStorage>()) {
  if (values.size() != rows * cols) {
    throw ShapeError("tensor " + to_string(Shape{rows, cols}) + " given " + std::to_string(values.size()) +
                     " values");
  }
  impl_->shape = {rows, cols};
  impl_->value = std::move(values);
  impl_->requires_grad = requires_grad;
}

Tensor Tensor::filled(std::size_t rows, std::size_t cols, double v) {
  return Tensor(rows, cols, std::vector<double>(rows * cols, v));
}

Tensor Tensor::from_rows(const std::vector<std::vector<double>>& rows, bool requires_grad) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  std::vector<double> v;
  v.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("ragged rows in tensor literal");
    v.insert(v.end(), row.begin(), row.end());
  }
  return Tensor(r, c, std::move(v), requires_grad);
}

double Tensor::item() const {
  if (size() != 1) throw ContractError("item() on a " + to_string(shape()) + " tensor");
  return impl_->value[0];
}

std::vector<double> Tensor::grad() const {
  if (impl_->grad.empty()) return std::vector<double>(size(), 0.0);
  return impl_->grad;
}

std::span<double> Tensor::mutable_grad() {
  if (impl_->grad.empty()) impl_->grad.assign(size(), 0.0);
  return impl_->grad;
}

void Tensor::zero_grad() {
  if (!impl_->grad.empty()) std::fill(impl_->grad.begin(), impl_->grad.end(), 0.0);
}

Tensor Tensor::clone() const {
  Tensor t(rows(), cols(), impl_->value, impl_->requires_grad);
  t.impl_->grad = impl_->grad;
  return t;
}

}  // namespace difnet
