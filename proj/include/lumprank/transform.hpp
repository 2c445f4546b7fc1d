#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lumprank/dense.hpp"
#include "lumprank/error.hpp"
#include "lumprank/graph.hpp"
#include "lumprank/lumping.hpp"

namespace lumprank {

/// Outcome of a numerical identity check.
struct CheckReport {
  bool passed = false;
  double max_abs_deviation = 0.0;
  std::string detail;
};

inline CheckReport make_report(double deviation, double tol, std::string detail) {
  return {deviation <= tol, deviation, std::move(detail)};
}

/// Invertible matrices L of order m with L e = e_1. Custom matrices are
/// supplied by the caller through build_custom_transform.
enum class TransformKind { Averaging, SparseElim, JordanDiff, Custom };

inline const char* to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Averaging: return "averaging";
    case TransformKind::SparseElim: return "sparse-elim";
    case TransformKind::JordanDiff: return "jordan-diff";
    case TransformKind::Custom: return "custom";
  }
  return "unknown";
}

inline constexpr TransformKind kBuiltinTransforms[] = {
    TransformKind::Averaging, TransformKind::SparseElim, TransformKind::JordanDiff};

/// Averaging:  I - (1/m) e_hat e^T
/// SparseElim: I - e_hat e_1^T
/// JordanDiff: I - J_m(0), J_m(0) the lower Jordan block with zero diagonal
/// where e_hat = e - e_1.
inline DenseMatrix build_transform(TransformKind kind, std::size_t m) {
  if (m == 0) throw DimensionError("transform order must be at least 1");
  DenseMatrix l = DenseMatrix::identity(m);
  switch (kind) {
    case TransformKind::Averaging: {
      const double inv = 1.0 / static_cast<double>(m);
      const double diag = static_cast<double>(m - 1) / static_cast<double>(m);
      for (std::size_t i = 1; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) l(i, j) = (i == j) ? diag : -inv;
      }
      break;
    }
    case TransformKind::SparseElim:
      for (std::size_t i = 1; i < m; ++i) l(i, 0) = -1.0;
      break;
    case TransformKind::JordanDiff:
      for (std::size_t i = 1; i < m; ++i) l(i, i - 1) = -1.0;
      break;
    case TransformKind::Custom:
      throw Error("custom transforms are built with build_custom_transform");
  }
  return l;
}

inline DenseMatrix build_custom_transform(DenseMatrix l) {
  if (!l.square() || l.rows() == 0) throw DimensionError("custom transform must be square and non-empty");
  return l;
}

/// Checks L e = e_1, invertibility, and L^{-1} e_1 = e.
inline CheckReport verify_transform_condition(const DenseMatrix& l, double tol) {
  if (!l.square() || l.rows() == 0) throw DimensionError("transform must be square");
  const std::size_t m = l.rows();
  std::ostringstream detail;

  const auto le = l.multiply(std::vector<double>(m, 1.0));
  std::vector<double> e1(m, 0.0);
  e1[0] = 1.0;
  const double cond_dev = max_abs_diff(le, e1);
  if (cond_dev > tol) detail << "L e differs from e_1 by " << cond_dev << "; ";

  LuFactorization lu(l);
  if (lu.singular(1e-10)) {
    detail << "L is singular (smallest pivot " << lu.min_pivot() << ")";
    return {false, std::max(cond_dev, 1.0), detail.str()};
  }
  const double inv_dev = max_abs_diff(lu.solve(e1), std::vector<double>(m, 1.0));
  if (inv_dev > tol) detail << "L^{-1} e_1 differs from e by " << inv_dev;
  return make_report(std::max(cond_dev, inv_dev), tol, detail.str());
}

/// Explicit permuted Google matrix
///   alpha H~ + alpha d~ w~^T + (1-alpha) e v~^T.
inline DenseMatrix build_dense_google(const WebGraph& g, const PageRankParams& params,
                                      const DanglingPartition& p,
                                      std::size_t dense_limit = 2000) {
  const std::size_t n = g.size();
  if (n > dense_limit) {
    throw SizeLimitError("graph has " + std::to_string(n) + " nodes, dense limit is " +
                         std::to_string(dense_limit) + "; use the sparse solver");
  }
  if (p.size() != n || params.size() != n) throw DimensionError("build_dense_google: size mismatch");
  const double alpha = params.alpha();
  const auto v = permute(params.v().values(), p);
  const auto w = permute(params.w().values(), p);
  DenseMatrix gt(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto targets = g.out(p.perm[i]);
    auto row = gt.row(i);
    if (targets.empty()) {
      for (std::size_t j = 0; j < n; ++j) row[j] = alpha * w[j] + (1.0 - alpha) * v[j];
    } else {
      const double link = alpha / static_cast<double>(targets.size());
      for (std::size_t j = 0; j < n; ++j) row[j] = (1.0 - alpha) * v[j];
      for (node_t t : targets) row[p.inv_perm[t]] += link;
    }
  }
  return gt;
}

/// Lumped matrix read directly off the blocks of G~:
///   [ G11    G12 e  ]
///   [ u1^T   u2^T e ]
/// with u^T the (shared) first dangling row.
inline DenseMatrix lumped_matrix(const DenseMatrix& gt, std::size_t k) {
  const std::size_t n = gt.rows();
  if (!gt.square() || k >= n) throw DimensionError("lumped_matrix: need k < n");
  DenseMatrix g1(k + 1, k + 1);
  for (std::size_t i = 0; i <= k; ++i) {
    for (std::size_t j = 0; j < k; ++j) g1(i, j) = gt(i, j);
    double tail = 0.0;
    for (std::size_t j = k; j < n; ++j) tail += gt(i, j);
    g1(i, k) = tail;
  }
  return g1;
}

struct SimilarityResult {
  DenseMatrix full;      // X G~ X^{-1}, n x n
  DenseMatrix lumped;    // leading (k+1) x (k+1) block
  DenseMatrix coupling;  // top-right (k+1) x (n-k-1) block
};

/// X G~ X^{-1} with X = blockdiag(I_k, L). X^{-1} is applied through an LU
/// solve of L.
inline SimilarityResult similarity_transform(const DenseMatrix& gt, const DenseMatrix& l,
                                             std::size_t k) {
  const std::size_t n = gt.rows();
  if (!gt.square() || k >= n) throw DimensionError("similarity_transform: need k < n");
  const std::size_t m = n - k;
  if (!l.square() || l.rows() != m) throw DimensionError("similarity_transform: L must have order n-k");
  LuFactorization lu(l);
  if (lu.singular(1e-10)) throw NumericError("similarity_transform: L is singular");

  // Left factor: rows k.. become L * G~[k.., :].
  DenseMatrix xg = gt;
  xg.set_block(k, 0, l * gt.block(k, 0, m, n));
  // Right factor: columns k.. become (X G~)[:, k..] L^{-1}.
  DenseMatrix full = xg;
  full.set_block(0, k, lu.solve_right(xg.block(0, k, n, m)));

  SimilarityResult r;
  r.lumped = full.block(0, 0, k + 1, k + 1);
  r.coupling = full.block(0, k + 1, k + 1, m - 1);
  r.full = std::move(full);
  return r;
}

/// Largest magnitude in the bottom n-k-1 rows of X G~ X^{-1}.
inline CheckReport check_block_triangular(const DenseMatrix& full, std::size_t k, double tol) {
  const std::size_t n = full.rows();
  if (k >= n) throw DimensionError("check_block_triangular: need k < n");
  double dev = 0.0;
  std::size_t worst_i = 0, worst_j = 0;
  for (std::size_t i = k + 1; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(full(i, j)) > dev) {
        dev = std::abs(full(i, j));
        worst_i = i;
        worst_j = j;
      }
    }
  }
  std::string detail;
  if (dev > tol) {
    detail = "entry (" + std::to_string(worst_i) + ", " + std::to_string(worst_j) + ") is " +
             std::to_string(dev);
  }
  return make_report(dev, tol, detail);
}

namespace detail {

inline std::pair<double, int> log_char_poly(const DenseMatrix& a, double lambda) {
  DenseMatrix m = -1.0 * a;
  for (std::size_t i = 0; i < a.rows(); ++i) m(i, i) += lambda;
  return LuFactorization(std::move(m)).log_abs_determinant();
}

}  // namespace detail

/// Compares det(lambda I - G~) with lambda^{n-k-1} det(lambda I - G1) at
/// lambda in {1.5, 2, 3} and five seeded points in (1.1, 4). Deviation is
/// relative, computed in log space so large orders do not overflow.
inline CheckReport check_spectrum_identity(const DenseMatrix& gt, const DenseMatrix& g1,
                                           std::size_t k, double tol,
                                           std::uint64_t seed = 20240601) {
  const std::size_t n = gt.rows();
  if (!gt.square() || !g1.square() || k >= n || g1.rows() != k + 1) {
    throw DimensionError("check_spectrum_identity: sizes inconsistent with k");
  }
  std::vector<double> points = {1.5, 2.0, 3.0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(1.1, 4.0);
  for (int i = 0; i < 5; ++i) points.push_back(dist(rng));

  double worst = 0.0;
  double worst_lambda = points.front();
  for (double lambda : points) {
    const auto [log_full, sign_full] = detail::log_char_poly(gt, lambda);
    auto [log_lumped, sign_lumped] = detail::log_char_poly(g1, lambda);
    log_lumped += static_cast<double>(n - k - 1) * std::log(lambda);
    double dev;
    if (sign_full == 0 || sign_lumped == 0 || sign_full != sign_lumped) {
      dev = (sign_full == sign_lumped && sign_full == 0) ? 0.0 : 2.0;
    } else {
      // |a - b| / max(|a|, |b|) for same-signed a, b.
      dev = -std::expm1(-std::abs(log_full - log_lumped));
    }
    if (dev > worst) {
      worst = dev;
      worst_lambda = lambda;
    }
  }
  std::ostringstream detail;
  detail << "seed=" << seed << " worst lambda=" << worst_lambda;
  return make_report(worst, tol, detail.str());
}

struct BlockLumpability {
  std::size_t row_block = 0;
  std::size_t col_block = 0;
  double spread = 0.0;  // max - min row sum of the block
  bool passed = false;
};

namespace detail {

inline std::vector<std::size_t> block_edges(std::size_t n, const std::vector<std::size_t>& cuts) {
  std::vector<std::size_t> edges{0};
  for (std::size_t c : cuts) {
    if (c == 0 || c >= n || c <= edges.back()) {
      throw DimensionError("partition cut points must be strictly increasing inside (0, n)");
    }
    edges.push_back(c);
  }
  edges.push_back(n);
  return edges;
}

}  // namespace detail

/// Row-sum spread of every off-diagonal block of M under the contiguous
/// partition given by interior cut points.
inline std::vector<BlockLumpability> lumpability_blocks(const DenseMatrix& m,
                                                        const std::vector<std::size_t>& cuts,
                                                        double tol) {
  if (!m.square()) throw DimensionError("check_lumpable: matrix must be square");
  const auto edges = detail::block_edges(m.rows(), cuts);
  const std::size_t blocks = edges.size() - 1;
  std::vector<BlockLumpability> out;
  for (std::size_t bi = 0; bi < blocks; ++bi) {
    for (std::size_t bj = 0; bj < blocks; ++bj) {
      if (bi == bj) continue;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t i = edges[bi]; i < edges[bi + 1]; ++i) {
        double s = 0.0;
        for (std::size_t j = edges[bj]; j < edges[bj + 1]; ++j) s += m(i, j);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      out.push_back({bi, bj, hi - lo, hi - lo <= tol});
    }
  }
  return out;
}

/// Lumpable iff every off-diagonal block has constant row sums.
inline CheckReport check_lumpable(const DenseMatrix& m, const std::vector<std::size_t>& cuts,
                                  double tol) {
  const auto blocks = lumpability_blocks(m, cuts, tol);
  double worst = 0.0;
  std::ostringstream detail;
  for (const auto& b : blocks) {
    worst = std::max(worst, b.spread);
    if (!b.passed) {
      detail << "block (" << b.row_block << "," << b.col_block << ") row sums vary by " << b.spread
             << "; ";
    }
  }
  return make_report(worst, tol, detail.str());
}

}  // namespace lumprank
