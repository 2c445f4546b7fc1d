#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "lumprank/error.hpp"

namespace lumprank {

/// Row-major dense matrix used by the verification labs.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range");
    DenseMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    }
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionError("set_block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i) {
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
  }

  std::vector<double> row_sums() const {
    std::vector<double> s(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (double x : row(i)) s[i] += x;
    }
    return s;
  }

  /// max_i sum_j |a_ij|
  double norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (double x : row(i)) s += std::abs(x);
      best = std::max(best, s);
    }
    return best;
  }

  double max_abs() const {
    double best = 0.0;
    for (double x : data_) best = std::max(best, std::abs(x));
    return best;
  }

  /// x^T A
  std::vector<double> left_multiply(std::span<const double> x) const {
    if (x.size() != rows_) throw DimensionError("left_multiply: length mismatch");
    std::vector<double> y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (x[i] == 0.0) continue;
      const auto r = row(i);
      for (std::size_t j = 0; j < cols_; ++j) y[j] += x[i] * r[j];
    }
    return y;
  }

  /// A x
  std::vector<double> multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw DimensionError("multiply: length mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      const auto r = row(i);
      for (std::size_t j = 0; j < cols_; ++j) y[i] += r[j] * x[j];
    }
    return y;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimensions differ");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      auto ci = c.row(i);
      for (std::size_t p = 0; p < a.cols_; ++p) {
        const double aip = a(i, p);
        if (aip == 0.0) continue;
        const auto bp = b.row(p);
        for (std::size_t j = 0; j < b.cols_; ++j) ci[j] += aip * bp[j];
      }
    }
    return c;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
    a.check_same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
    a.check_same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend DenseMatrix operator*(double s, DenseMatrix a) {
    for (double& x : a.data_) x *= s;
    return a;
  }

 private:
  void check_same_shape(const DenseMatrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw DimensionError("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Largest entrywise |a_ij - b_ij|.
inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix shapes differ");
  double best = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    best = std::max(best, std::abs(a.data()[i] - b.data()[i]));
  }
  return best;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("vector lengths differ");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("vector lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

/// PA = LU with partial (row) pivoting. L is unit lower triangular and is
/// stored with U in one matrix.
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
    if (!lu_.square()) throw DimensionError("LU of a non-square matrix");
    const std::size_t n = lu_.rows();
    norm_ = lu_.norm_inf();
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    min_pivot_ = n == 0 ? 0.0 : std::numeric_limits<double>::infinity();

    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      double best = std::abs(lu_(c, c));
      for (std::size_t r = c + 1; r < n; ++r) {
        if (std::abs(lu_(r, c)) > best) {
          best = std::abs(lu_(r, c));
          p = r;
        }
      }
      if (p != c) {
        std::swap_ranges(lu_.row(p).begin(), lu_.row(p).end(), lu_.row(c).begin());
        std::swap(perm_[p], perm_[c]);
        sign_ = -sign_;
      }
      min_pivot_ = std::min(min_pivot_, best);
      const double pivot = lu_(c, c);
      if (pivot == 0.0) continue;
      for (std::size_t r = c + 1; r < n; ++r) {
        const double f = lu_(r, c) / pivot;
        lu_(r, c) = f;
        if (f == 0.0) continue;
        for (std::size_t j = c + 1; j < n; ++j) lu_(r, j) -= f * lu_(c, j);
      }
    }
  }

  std::size_t size() const noexcept { return lu_.rows(); }

  /// Smallest pivot magnitude encountered.
  double min_pivot() const noexcept { return min_pivot_; }
  /// Magnitude of the final diagonal entry of U.
  double last_pivot() const { return size() == 0 ? 0.0 : std::abs(lu_(size() - 1, size() - 1)); }
  /// Infinity norm of the factored matrix.
  double norm() const noexcept { return norm_; }

  /// True when some pivot is at most rel_tol * ||A||_inf.
  bool singular(double rel_tol = 1e-14) const { return !(min_pivot_ > rel_tol * norm_); }

  double determinant() const {
    double d = sign_;
    for (std::size_t i = 0; i < size(); ++i) d *= lu_(i, i);
    return d;
  }

  /// log|det A| and the sign of det A (0 when singular).
  std::pair<double, int> log_abs_determinant() const {
    double log_abs = 0.0;
    int sign = sign_;
    for (std::size_t i = 0; i < size(); ++i) {
      const double d = lu_(i, i);
      if (d == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
      if (d < 0.0) sign = -sign;
      log_abs += std::log(std::abs(d));
    }
    return {log_abs, sign};
  }

  /// x with A x = b.
  std::vector<double> solve(std::span<const double> b) const {
    require_solvable(b.size());
    const std::size_t n = size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    }
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
      x[i] /= lu_(i, i);
    }
    return x;
  }

  /// x with x^T A = b^T.
  std::vector<double> solve_transposed(std::span<const double> b) const {
    require_solvable(b.size());
    const std::size_t n = size();
    // A^T = U^T L^T P, so solve U^T z = b, L^T y = z, x = P^T y.
    std::vector<double> z(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) z[i] -= lu_(j, i) * z[j];
      z[i] /= lu_(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) z[i] -= lu_(j, i) * z[j];
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = z[i];
    return x;
  }

  /// A^{-1} B
  DenseMatrix solve_left(const DenseMatrix& b) const {
    if (b.rows() != size()) throw DimensionError("solve_left: row count mismatch");
    DenseMatrix x(b.rows(), b.cols());
    std::vector<double> col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
      for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
      const auto s = solve(col);
      for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = s[i];
    }
    return x;
  }

  /// B A^{-1}
  DenseMatrix solve_right(const DenseMatrix& b) const {
    if (b.cols() != size()) throw DimensionError("solve_right: column count mismatch");
    DenseMatrix x(b.rows(), b.cols());
    for (std::size_t i = 0; i < b.rows(); ++i) {
      const auto s = solve_transposed(b.row(i));
      std::copy(s.begin(), s.end(), x.row(i).begin());
    }
    return x;
  }

 private:
  void require_solvable(std::size_t rhs) const {
    if (rhs != size()) throw DimensionError("LU solve: right-hand side length mismatch");
    for (std::size_t i = 0; i < size(); ++i) {
      if (lu_(i, i) == 0.0) throw NumericError("LU solve: matrix is singular");
    }
  }

  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  double min_pivot_ = 0.0;
  double norm_ = 0.0;
};

inline double determinant(const DenseMatrix& a) { return LuFactorization(a).determinant(); }

/// Stationary distribution of an irreducible row-stochastic matrix by a
/// direct solve: (I - G)^T pi = 0 with the last equation replaced by e^T pi = 1.
inline std::vector<double> stationary_distribution(const DenseMatrix& g) {
  if (!g.square() || g.rows() == 0) throw DimensionError("stationary_distribution: need a square matrix");
  const std::size_t n = g.rows();
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - g(j, i);
  }
  for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  std::vector<double> rhs(n, 0.0);
  rhs[n - 1] = 1.0;
  LuFactorization lu(std::move(a));
  if (lu.singular()) throw NumericError("stationary_distribution: chain is not irreducible");
  auto pi = lu.solve(rhs);
  double s = 0.0;
  for (double x : pi) s += x;
  for (double& x : pi) x /= s;
  return pi;
}

}  // namespace lumprank
