#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "difnet/gdu.hpp"
#include "difnet/graph.hpp"
#include "difnet/rng.hpp"
#include "difnet/tensor.hpp"
#include "oracles.hpp"

namespace testutil {

inline difnet::Tensor random_tensor(std::size_t rows, std::size_t cols, difnet::CounterRng& rng,
                                    bool requires_grad = false, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.uniform(lo, hi);
  return difnet::Tensor(rows, cols, std::move(v), requires_grad);
}

// Entries of magnitude in [0.5, 1.5] with random sign, so that no gradient
// entry of a product or sum is near zero.
inline difnet::Tensor signed_tensor(std::size_t rows, std::size_t cols, difnet::CounterRng& rng,
                                    bool requires_grad = false) {
  std::vector<double> v(rows * cols);
  for (double& x : v) x = (rng.bernoulli(0.5) ? 1.0 : -1.0) * rng.uniform(0.5, 1.5);
  return difnet::Tensor(rows, cols, std::move(v), requires_grad);
}

inline oracle::Mat to_mat(const difnet::Tensor& t) {
  oracle::Mat m(t.rows(), oracle::Vec(t.cols()));
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) m[r][c] = t(r, c);
  return m;
}

inline oracle::Vec row(const difnet::Tensor& t, std::size_t r) { return to_mat(t)[r]; }

inline oracle::Mask to_mask(const difnet::DiffusionMask& m) {
  oracle::Mask out(m.size(), std::vector<bool>(m.size(), false));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j : m.row(i)) out[i][j] = true;
  return out;
}

inline std::vector<std::pair<std::size_t, std::size_t>> edge_pairs(const difnet::Graph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& e : g.edges()) out.emplace_back(e.a, e.b);
  return out;
}

inline oracle::GduFull to_oracle(const difnet::GduParamsFull& p) {
  return {to_mat(p.w_f), to_mat(p.w_e), to_mat(p.w_u), to_mat(p.w_g), to_mat(p.w_r)};
}

inline oracle::GduSimplified to_oracle(const difnet::GduParamsSimplified& p) {
  return {to_mat(p.w_u), to_mat(p.w_u_res), to_mat(p.w_g), to_mat(p.w_f), to_mat(p.w_e)};
}

inline double max_abs_diff(const oracle::Mat& a, const oracle::Mat& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  return worst;
}

// Scratch directory removed when the object goes out of scope.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("difnet-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil
