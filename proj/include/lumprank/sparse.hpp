#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lumprank/error.hpp"

namespace lumprank {

using node_t = std::uint32_t;

/// Compressed sparse row matrix of doubles.
///
/// Only the transposed product x^T A is needed by the ranking operators, so
/// the product routine scatters along rows instead of gathering along columns.
class CsrMatrix {
 public:
  CsrMatrix() : row_ptr_(1, 0) {}

  /// Empty rows x cols matrix.
  CsrMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<node_t> col_idx, std::vector<double> values)
      : rows_(rows),
        cols_(cols),
        row_ptr_(std::move(row_ptr)),
        col_idx_(std::move(col_idx)),
        values_(std::move(values)) {
    if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 ||
        row_ptr_.back() != col_idx_.size() || col_idx_.size() != values_.size()) {
      throw DimensionError("inconsistent CSR arrays");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (row_ptr_[i] > row_ptr_[i + 1]) throw DimensionError("CSR row pointers decrease");
    }
    for (node_t c : col_idx_) {
      if (c >= cols_) throw DimensionError("CSR column index out of range");
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const node_t> row_cols(std::size_t i) const {
    return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::size_t row_size(std::size_t i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  bool row_empty(std::size_t i) const { return row_ptr_[i] == row_ptr_[i + 1]; }

  double row_sum(std::size_t i) const {
    double s = 0.0;
    for (double v : row_values(i)) s += v;
    return s;
  }

  /// y += scale * x^T A
  void transposed_multiply_add(std::span<const double> x, double scale,
                               std::span<double> y) const {
    if (x.size() != rows_ || y.size() != cols_) {
      throw DimensionError("transposed_multiply_add: size mismatch");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      const double xi = scale * x[i];
      if (xi == 0.0) continue;
      for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
        y[col_idx_[p]] += xi * values_[p];
      }
    }
  }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const node_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<node_t> col_idx_;
  std::vector<double> values_;
};

}  // namespace lumprank
