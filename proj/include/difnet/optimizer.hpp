#pragma once

#include <cstddef>
#include <vector>

#include "difnet/tensor.hpp"

namespace difnet {

struct AdamOptions {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Coupled L2: weight_decay · w is added to the gradient before the moments.
  double weight_decay = 0.0;
};

class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamOptions opts);

  void step();
  void zero_grad();
  std::size_t steps() const noexcept { return t_; }

 private:
  std::vector<Tensor> params_;
  AdamOptions opts_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::size_t t_ = 0;
};

}  // namespace difnet
