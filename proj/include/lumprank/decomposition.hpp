#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "lumprank/dense.hpp"
#include "lumprank/error.hpp"
#include "lumprank/transform.hpp"

namespace lumprank {

/// Block LDU factorization of I - G~ split after the first k rows/columns:
///   I - G~ = [I 0; -G21 (I-G11)^{-1} I] [I-G11 0; 0 I-S] [I -(I-G11)^{-1} G12; 0 I]
/// with S = G22 + G21 (I-G11)^{-1} G12 the stochastic complement.
struct LduFactors {
  DenseMatrix lower;
  DenseMatrix diag;
  DenseMatrix upper;
  DenseMatrix complement;
  std::size_t k = 0;
};

namespace detail {

struct SplitBlocks {
  DenseMatrix g11, g12, g21, g22;
};

inline SplitBlocks split(const DenseMatrix& gt, std::size_t k) {
  const std::size_t n = gt.rows();
  if (!gt.square()) throw DimensionError("decomposition: matrix must be square");
  if (k < 1 || k >= n) throw DimensionError("decomposition: need 1 <= k <= n-1");
  const std::size_t m = n - k;
  return {gt.block(0, 0, k, k), gt.block(0, k, k, m), gt.block(k, 0, m, k), gt.block(k, k, m, m)};
}

inline LuFactorization factor_leading(const DenseMatrix& g11) {
  LuFactorization lu(DenseMatrix::identity(g11.rows()) - g11);
  if (lu.singular(1e-13)) throw NumericError("I - G11 is singular");
  return lu;
}

}  // namespace detail

inline LduFactors ldu_factors(const DenseMatrix& gt, std::size_t k) {
  const auto b = detail::split(gt, k);
  const std::size_t n = gt.rows();
  const std::size_t m = n - k;
  const auto lu = detail::factor_leading(b.g11);

  const DenseMatrix right = lu.solve_left(b.g12);  // (I-G11)^{-1} G12
  const DenseMatrix left = lu.solve_right(b.g21);  // G21 (I-G11)^{-1}

  LduFactors f;
  f.k = k;
  f.complement = b.g22 + b.g21 * right;

  f.lower = DenseMatrix::identity(n);
  f.lower.set_block(k, 0, -1.0 * left);
  f.upper = DenseMatrix::identity(n);
  f.upper.set_block(0, k, -1.0 * right);
  f.diag = DenseMatrix(n, n);
  f.diag.set_block(0, 0, DenseMatrix::identity(k) - b.g11);
  f.diag.set_block(k, k, DenseMatrix::identity(m) - f.complement);
  return f;
}

/// S = G22 + G21 (I-G11)^{-1} G12. Throws if S comes out negative beyond
/// 1e-12 or its rows miss 1 by more than 1e-10.
inline DenseMatrix stochastic_complement(const DenseMatrix& gt, std::size_t k) {
  const auto b = detail::split(gt, k);
  const auto lu = detail::factor_leading(b.g11);
  DenseMatrix s = b.g22 + b.g21 * lu.solve_left(b.g12);
  for (double x : s.data()) {
    if (x < -1e-12) throw NumericError("stochastic complement has a negative entry");
  }
  for (double r : s.row_sums()) {
    if (std::abs(r - 1.0) > 1e-10) throw NumericError("stochastic complement is not row-stochastic");
  }
  return s;
}

/// ||lower * diag * upper - (I - G~)||_max against tol.
inline CheckReport check_ldu_reconstruction(const LduFactors& f, const DenseMatrix& gt, double tol) {
  const DenseMatrix product = f.lower * f.diag * f.upper;
  const DenseMatrix target = DenseMatrix::identity(gt.rows()) - gt;
  return make_report(max_abs_diff(product, target), tol, "");
}

/// Row-sum deviation and negativity of S, folded into one deviation.
inline CheckReport check_complement_stochastic(const DenseMatrix& s, double tol) {
  double dev = 0.0;
  for (double r : s.row_sums()) dev = std::max(dev, std::abs(r - 1.0));
  double most_negative = 0.0;
  for (double x : s.data()) most_negative = std::min(most_negative, x);
  std::string detail;
  if (most_negative < 0.0) detail = "negative entry " + std::to_string(most_negative);
  return make_report(std::max(dev, -most_negative), tol, detail);
}

/// I - S must be singular: the last pivot of its LU is at most
/// rel_tol * ||I - S||_inf.
inline CheckReport check_complement_singular(const DenseMatrix& s, double rel_tol) {
  LuFactorization lu(DenseMatrix::identity(s.rows()) - s);
  // I - S has entries of order one; when S is 1x1 the norm itself is round-off.
  const double scale = std::max(lu.norm(), 1.0);
  const double ratio = std::min(lu.min_pivot(), lu.last_pivot()) / scale;
  return make_report(ratio, rel_tol, "");
}

struct CoupledStationarityReport {
  CheckReport censored;     // pi2^T S = pi2^T
  CheckReport nondangling;  // pi1^T = pi2^T G21 (I-G11)^{-1}
  CheckReport dangling;     // pi2^T = pi1^T G12 (I-G22)^{-1}
  bool dangling_skipped = false;

  bool passed() const {
    return censored.passed && nondangling.passed && (dangling_skipped || dangling.passed);
  }
  double max_abs_deviation() const {
    double d = std::max(censored.max_abs_deviation, nondangling.max_abs_deviation);
    return dangling_skipped ? d : std::max(d, dangling.max_abs_deviation);
  }
};

/// The three relations tying the nondangling and dangling parts of the
/// stationary vector together. The third is skipped when u2^T e is within
/// 1e-12 of 1, where I - G22 is singular.
inline CoupledStationarityReport verify_coupled_stationarity(std::span<const double> pi_tilde,
                                                             const DenseMatrix& gt, std::size_t k,
                                                             double tol) {
  const std::size_t n = gt.rows();
  if (pi_tilde.size() != n) throw DimensionError("verify_coupled_stationarity: length mismatch");
  const auto b = detail::split(gt, k);
  const std::size_t m = n - k;
  const std::span<const double> pi1 = pi_tilde.first(k);
  const std::span<const double> pi2 = pi_tilde.subspan(k);

  CoupledStationarityReport r;
  const auto lu11 = detail::factor_leading(b.g11);
  const DenseMatrix s = b.g22 + b.g21 * lu11.solve_left(b.g12);
  r.censored = make_report(max_abs_diff(s.left_multiply(pi2), pi2), tol, "pi2^T S = pi2^T");

  const auto pi1_from_pi2 = lu11.solve_transposed(b.g21.left_multiply(pi2));
  r.nondangling = make_report(max_abs_diff(pi1_from_pi2, pi1), tol,
                              "pi1^T = pi2^T G21 (I-G11)^{-1}");

  // G22 = e u2^T, so its row sum is u2^T e.
  double u2_sum = 0.0;
  for (double x : b.g22.row(0)) u2_sum += x;
  if (u2_sum >= 1.0 - 1e-12) {
    r.dangling_skipped = true;
    r.dangling = {true, 0.0, "skipped: u2^T e = 1, I - G22 singular"};
    return r;
  }
  LuFactorization lu22(DenseMatrix::identity(m) - b.g22);
  const auto pi2_from_pi1 = lu22.solve_transposed(b.g12.left_multiply(pi1));
  r.dangling = make_report(max_abs_diff(pi2_from_pi1, pi2), tol,
                           "pi2^T = pi1^T G12 (I-G22)^{-1}");
  return r;
}

}  // namespace lumprank
