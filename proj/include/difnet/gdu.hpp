#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "difnet/rng.hpp"
#include "difnet/tape.hpp"
#include "difnet/tensor.hpp"

namespace difnet {

enum class GduVariant { full, simplified };

std::string to_string(GduVariant v);
GduVariant parse_gdu_variant(const std::string& s);

struct NamedTensor {
  std::string name;
  Tensor value;
};

// Weights of the full gated diffusive unit, each stored [d_h × in].
struct GduParamsFull {
  Tensor w_f;  // adjustment gate, in = 3·d_h
  Tensor w_e;  // evolving gate, in = 3·d_h
  Tensor w_u;  // candidate state, in = 3·d_h, shared by all four branches
  Tensor w_g;  // selection gate g, in = 5·d_h
  Tensor w_r;  // selection gate r, in = 5·d_h

  static GduParamsFull zeros(std::size_t hidden);
  static GduParamsFull glorot(std::size_t hidden, CounterRng& rng);
  std::size_t hidden() const { return w_f.rows(); }
  std::vector<NamedTensor> named(const std::string& prefix) const;
};

// Weights of the simplified unit. w_u_res may be shared between layers.
struct GduParamsSimplified {
  Tensor w_u;      // in = 2·d_h
  Tensor w_u_res;  // residual projection, in = d_h
  Tensor w_g;      // in = 2·d_h
  Tensor w_f;      // in = 3·d_h
  Tensor w_e;      // in = 3·d_h

  static GduParamsSimplified zeros(std::size_t hidden);
  // Pass a defined shared_res to reuse an existing residual projection.
  static GduParamsSimplified glorot(std::size_t hidden, CounterRng& rng, Tensor shared_res = {});
  std::size_t hidden() const { return w_f.rows(); }
  std::vector<NamedTensor> named(const std::string& prefix, bool include_res = true) const;
};

// One row per node: z is the diffused neighbourhood, h the lower-layer state
// and x_res the graph residual term. A single node is the 1-row case.
struct CellInputs {
  Tensor z;
  Tensor h;
  Tensor x_res;
};

struct GateValues {
  Tensor f;
  Tensor e;
  Tensor g;
  Tensor r;  // undefined for the simplified unit
};

Tensor gdu_full(Tape& tape, const GduParamsFull& p, const CellInputs& in);
Tensor gdu_simplified(Tape& tape, const GduParamsSimplified& p, const CellInputs& in);

GateValues gate_values(Tape& tape, const GduParamsFull& p, const CellInputs& in);
GateValues gate_values(Tape& tape, const GduParamsSimplified& p, const CellInputs& in);

// Uniform(-a, a) with a = √(6 / (fan_in + fan_out)).
Tensor glorot_uniform(std::size_t rows, std::size_t cols, CounterRng& rng);

}  // namespace difnet
