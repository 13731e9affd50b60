#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "difnet/tape.hpp"
#include "difnet/tensor.hpp"

namespace difnet {

// Builds a scalar loss on the given tape from the current parameter values.
using ScalarObjective = std::function<Tensor(Tape&)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_entry;  // "<param index>[<flat index>]"
  // Largest |analytic − numeric| divided by the rounding noise of the central
  // difference, 8·max(1, |f(θ+ε)|, |f(θ−ε)|)·DBL_EPSILON / 2ε. At most 1 means
  // every discrepancy is explained by the last few ulps of O(1) intermediates.
  double max_noise_ratio = 0.0;
};

// Compares reverse-mode gradients against central differences
// (f(θ+ε) − f(θ−ε)) / 2ε for every entry of every parameter. The relative
// error of an entry is |analytic − numeric| / max(1e-8, |analytic| + |numeric|).
// Parameter values are restored afterwards and their gradients zeroed.
GradCheckResult grad_check_detailed(const ScalarObjective& f, std::span<Tensor> params, double eps = 1e-6);

double grad_check(const ScalarObjective& f, std::span<Tensor> params, double eps = 1e-6);

}  // namespace difnet
