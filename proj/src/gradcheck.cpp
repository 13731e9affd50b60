#include "difnet/gradcheck.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "difnet/error.hpp"

namespace difnet {
namespace {

double evaluate(const ScalarObjective& f) {
  Tape tape;
  const double v = f(tape).item();
  if (!std::isfinite(v)) throw NumericError("grad_check: objective evaluated to a non-finite value");
  return v;
}

}  // namespace

GradCheckResult grad_check_detailed(const ScalarObjective& f, std::span<Tensor> params, double eps) {
  if (!(eps > 0.0)) throw ContractError("grad_check: eps must be positive");

  for (auto& p : params) p.zero_grad();
  {
    Tape tape;
    Tensor loss = f(tape);
    if (!std::isfinite(loss.item())) throw NumericError("grad_check: objective evaluated to a non-finite value");
    tape.backward(loss);
  }
  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (auto& p : params) analytic.push_back(p.grad());

  GradCheckResult result;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    auto values = params[pi].mutable_values();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + eps;
      const double up = evaluate(f);
      values[k] = saved - eps;
      const double down = evaluate(f);
      values[k] = saved;

      const double numeric = (up - down) / (2.0 * eps);
      const double a = analytic[pi][k];
      const double err = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_entry = std::to_string(pi) + "[" + std::to_string(k) + "]";
      }
      const double noise = 8.0 * std::max({1.0, std::abs(up), std::abs(down)}) * DBL_EPSILON / (2.0 * eps);
      result.max_noise_ratio = std::max(result.max_noise_ratio, std::abs(a - numeric) / std::max(noise, 1e-300));
    }
  }
  for (auto& p : params) p.zero_grad();
  return result;
}

double grad_check(const ScalarObjective& f, std::span<Tensor> params, double eps) {
  return grad_check_detailed(f, params, eps).max_rel_error;
}

}  // namespace difnet
