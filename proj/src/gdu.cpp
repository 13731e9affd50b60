#include "difnet/gdu.hpp"

#include <cmath>

#include "difnet/error.hpp"

namespace difnet {

std::string to_string(GduVariant v) { return v == GduVariant::full ? "full" : "simplified"; }

GduVariant parse_gdu_variant(const std::string& s) {
  if (s == "full") return GduVariant::full;
  if (s == "simplified") return GduVariant::simplified;
  throw ContractError("unknown GDU variant '" + s + "' (expected full or simplified)");
}

Tensor glorot_uniform(std::size_t rows, std::size_t cols, CounterRng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.uniform(-limit, limit);
  return Tensor(rows, cols, std::move(v), true);
}

namespace {

Tensor trainable_zeros(std::size_t rows, std::size_t cols) { return Tensor(rows, cols, true); }

void expect_shape(const Tensor& t, std::size_t rows, std::size_t cols, const char* what) {
  if (t.rows() != rows || t.cols() != cols) {
    throw ShapeError(std::string("GDU ") + what + " is " + to_string(t.shape()) + ", expected " +
                     to_string(Shape{rows, cols}));
  }
}

void check_inputs(const CellInputs& in, std::size_t d) {
  if (in.z.shape() != in.h.shape() || in.z.shape() != in.x_res.shape()) {
    throw ShapeError("GDU inputs z " + to_string(in.z.shape()) + ", h " + to_string(in.h.shape()) + ", x_res " +
                     to_string(in.x_res.shape()) + " must share a shape");
  }
  if (in.z.cols() != d) {
    throw ShapeError("GDU inputs have width " + std::to_string(in.z.cols()) + ", cell hidden size is " +
                     std::to_string(d));
  }
}

// z̃ = f ⊗ z and h̃ = e ⊗ h with f, e = σ(W [x̃ ⊔ z ⊔ h]).
struct Adjusted {
  Tensor f, e, z_adj, h_adj;
};

Adjusted adjust(Tape& tape, const Tensor& w_f, const Tensor& w_e, const CellInputs& in) {
  Tensor xzh = tape.concat_cols({in.x_res, in.z, in.h});
  Adjusted a;
  a.f = tape.sigmoid(tape.matmul_nt(xzh, w_f));
  a.e = tape.sigmoid(tape.matmul_nt(xzh, w_e));
  a.z_adj = tape.mul(a.f, in.z);
  a.h_adj = tape.mul(a.e, in.h);
  return a;
}

void check_full(const GduParamsFull& p, const CellInputs& in) {
  const std::size_t d = p.hidden();
  expect_shape(p.w_f, d, 3 * d, "W_f");
  expect_shape(p.w_e, d, 3 * d, "W_e");
  expect_shape(p.w_u, d, 3 * d, "W_u");
  expect_shape(p.w_g, d, 5 * d, "W_g");
  expect_shape(p.w_r, d, 5 * d, "W_r");
  check_inputs(in, d);
}

void check_simplified(const GduParamsSimplified& p, const CellInputs& in) {
  const std::size_t d = p.hidden();
  expect_shape(p.w_f, d, 3 * d, "W_f");
  expect_shape(p.w_e, d, 3 * d, "W_e");
  expect_shape(p.w_u, d, 2 * d, "W_u");
  expect_shape(p.w_u_res, d, d, "W'_u");
  expect_shape(p.w_g, d, 2 * d, "W_g");
  check_inputs(in, d);
}

}  // namespace

GduParamsFull GduParamsFull::zeros(std::size_t d) {
  return {trainable_zeros(d, 3 * d), trainable_zeros(d, 3 * d), trainable_zeros(d, 3 * d),
          trainable_zeros(d, 5 * d), trainable_zeros(d, 5 * d)};
}

GduParamsFull GduParamsFull::glorot(std::size_t d, CounterRng& rng) {
  GduParamsFull p;
  p.w_f = glorot_uniform(d, 3 * d, rng);
  p.w_e = glorot_uniform(d, 3 * d, rng);
  p.w_u = glorot_uniform(d, 3 * d, rng);
  p.w_g = glorot_uniform(d, 5 * d, rng);
  p.w_r = glorot_uniform(d, 5 * d, rng);
  return p;
}

std::vector<NamedTensor> GduParamsFull::named(const std::string& prefix) const {
  return {{prefix + "w_f", w_f}, {prefix + "w_e", w_e}, {prefix + "w_u", w_u},
          {prefix + "w_g", w_g}, {prefix + "w_r", w_r}};
}

GduParamsSimplified GduParamsSimplified::zeros(std::size_t d) {
  return {trainable_zeros(d, 2 * d), trainable_zeros(d, d), trainable_zeros(d, 2 * d), trainable_zeros(d, 3 * d),
          trainable_zeros(d, 3 * d)};
}

GduParamsSimplified GduParamsSimplified::glorot(std::size_t d, CounterRng& rng, Tensor shared_res) {
  GduParamsSimplified p;
  p.w_u = glorot_uniform(d, 2 * d, rng);
  p.w_u_res = shared_res.defined() ? shared_res : glorot_uniform(d, d, rng);
  p.w_g = glorot_uniform(d, 2 * d, rng);
  p.w_f = glorot_uniform(d, 3 * d, rng);
  p.w_e = glorot_uniform(d, 3 * d, rng);
  return p;
}

std::vector<NamedTensor> GduParamsSimplified::named(const std::string& prefix, bool include_res) const {
  std::vector<NamedTensor> out{{prefix + "w_u", w_u}};
  if (include_res) out.push_back({prefix + "w_u_res", w_u_res});
  out.push_back({prefix + "w_g", w_g});
  out.push_back({prefix + "w_f", w_f});
  out.push_back({prefix + "w_e", w_e});
  return out;
}

GateValues gate_values(Tape& tape, const GduParamsFull& p, const CellInputs& in) {
  check_full(p, in);
  Adjusted a = adjust(tape, p.w_f, p.w_e, in);
  Tensor all5 = tape.concat_cols({in.x_res, in.z, in.h, a.z_adj, a.h_adj});
  return {a.f, a.e, tape.sigmoid(tape.matmul_nt(all5, p.w_g)), tape.sigmoid(tape.matmul_nt(all5, p.w_r))};
}

GateValues gate_values(Tape& tape, const GduParamsSimplified& p, const CellInputs& in) {
  check_simplified(p, in);
  Adjusted a = adjust(tape, p.w_f, p.w_e, in);
  Tensor g = tape.sigmoid(tape.matmul_nt(tape.concat_cols({a.z_adj, a.h_adj}), p.w_g));
  return {a.f, a.e, g, Tensor{}};
}

Tensor gdu_full(Tape& tape, const GduParamsFull& p, const CellInputs& in) {
  check_full(p, in);
  Adjusted a = adjust(tape, p.w_f, p.w_e, in);
  Tensor all5 = tape.concat_cols({in.x_res, in.z, in.h, a.z_adj, a.h_adj});
  Tensor g = tape.sigmoid(tape.matmul_nt(all5, p.w_g));
  Tensor r = tape.sigmoid(tape.matmul_nt(all5, p.w_r));
  Tensor not_g = tape.one_minus(g);
  Tensor not_r = tape.one_minus(r);

  auto candidate = [&](const Tensor& z, const Tensor& h) {
    return tape.tanh(tape.matmul_nt(tape.concat_cols({in.x_res, z, h}), p.w_u));
  };
  Tensor both = tape.mul(tape.mul(g, r), candidate(a.z_adj, a.h_adj));
  Tensor h_only = tape.mul(tape.mul(not_g, r), candidate(in.z, a.h_adj));
  Tensor z_only = tape.mul(tape.mul(g, not_r), candidate(a.z_adj, in.h));
  Tensor neither = tape.mul(tape.mul(not_g, not_r), candidate(in.z, in.h));
  return tape.add(tape.add(both, h_only), tape.add(z_only, neither));
}

Tensor gdu_simplified(Tape& tape, const GduParamsSimplified& p, const CellInputs& in) {
  check_simplified(p, in);
  Adjusted a = adjust(tape, p.w_f, p.w_e, in);
  Tensor adjusted = tape.concat_cols({a.z_adj, a.h_adj});
  Tensor g = tape.sigmoid(tape.matmul_nt(adjusted, p.w_g));
  Tensor mixed = tape.add(tape.mul(g, tape.matmul_nt(adjusted, p.w_u)),
                          tape.mul(tape.one_minus(g), tape.matmul_nt(tape.concat_cols({in.z, in.h}), p.w_u)));
  return tape.tanh(tape.add(mixed, tape.matmul_nt(in.x_res, p.w_u_res)));
}

}  // namespace difnet
