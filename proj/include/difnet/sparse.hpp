#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace difnet {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Compressed sparse row matrix of constants (not differentiated through).
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Duplicate coordinates are summed; columns within a row end up sorted.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return col_idx_.size(); }

  std::span<const std::size_t> row_cols(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  double at(std::size_t r, std::size_t c) const;
  SparseMatrix transposed() const;
  std::vector<double> to_dense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

// Binary n×n support matrix M restricting attention: M(i,j)=1 iff j is in
// row i's support. Stored as sorted column lists so that node counts in the
// tens of thousands stay cheap.
class DiffusionMask {
 public:
  DiffusionMask() = default;

  // Rows may be given unsorted and with repeats. Empty rows are representable
  // so that consumers can reject them.
  DiffusionMask(std::size_t n, std::vector<std::vector<std::size_t>> rows);

  static DiffusionMask from_dense(std::size_t n, std::span<const std::uint8_t> dense);

  std::size_t size() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return col_idx_.size(); }
  std::span<const std::size_t> row(std::size_t i) const {
    return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  bool at(std::size_t i, std::size_t j) const;
  std::vector<std::uint8_t> to_dense() const;

  friend bool operator==(const DiffusionMask&, const DiffusionMask&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
};

}  // namespace difnet
