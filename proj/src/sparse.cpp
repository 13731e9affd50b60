#include "difnet/sparse.hpp"

#include <algorithm>
#include <string>

#include "difnet/error.hpp"

namespace difnet {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row >= rows || t.col >= cols) {
      throw BoundsError("sparse entry (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                        ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k > 0 && entries[k].row == entries[k - 1].row && entries[k].col == entries[k - 1].col) {
      m.values_.back() += entries[k].value;
      continue;
    }
    m.col_idx_.push_back(entries[k].col);
    m.values_.push_back(entries[k].value);
    ++m.row_ptr_[entries[k].row + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw BoundsError("sparse index out of range");
  auto cols = row_cols(r);
  auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + static_cast<std::size_t>(it - cols.begin())];
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t r = 0; r < rows_; ++r) {
    auto cs = row_cols(r);
    auto vs = row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) t.push_back({cs[k], r, vs[k]});
  }
  return from_triplets(cols_, rows_, std::move(t));
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(rows_ * cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto cs = row_cols(r);
    auto vs = row_values(r);
    for (std::size_t k = 0; k < cs.size(); ++k) d[r * cols_ + cs[k]] = vs[k];
  }
  return d;
}

DiffusionMask::DiffusionMask(std::size_t n, std::vector<std::vector<std::size_t>> rows) : n_(n) {
  if (rows.size() != n) {
    throw ShapeError("mask expects " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
  }
  row_ptr_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    if (!r.empty() && r.back() >= n) {
      throw BoundsError("mask column " + std::to_string(r.back()) + " outside " + std::to_string(n) + " nodes");
    }
    col_idx_.insert(col_idx_.end(), r.begin(), r.end());
    row_ptr_[i + 1] = col_idx_.size();
  }
}

DiffusionMask DiffusionMask::from_dense(std::size_t n, std::span<const std::uint8_t> dense) {
  if (dense.size() != n * n) throw ShapeError("dense mask size does not match n*n");
  std::vector<std::vector<std::size_t>> rows(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (dense[i * n + j] != 0) rows[i].push_back(j);
  return DiffusionMask(n, std::move(rows));
}

bool DiffusionMask::at(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw BoundsError("mask index out of range");
  auto r = row(i);
  return std::binary_search(r.begin(), r.end(), j);
}

std::vector<std::uint8_t> DiffusionMask::to_dense() const {
  std::vector<std::uint8_t> d(n_ * n_, 0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j : row(i)) d[i * n_ + j] = 1;
  return d;
}

}  // namespace difnet
