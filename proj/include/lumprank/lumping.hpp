#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "lumprank/error.hpp"
#include "lumprank/graph.hpp"
#include "lumprank/sparse.hpp"

namespace lumprank {

/// Reordering that puts the k nondangling pages first and the n-k dangling
/// pages last, each group in ascending original order.
///
/// `perm[i]` is the original index of the page at position i.
struct DanglingPartition {
  std::size_t k = 0;
  std::vector<node_t> perm;
  std::vector<node_t> inv_perm;

  std::size_t size() const noexcept { return perm.size(); }
  std::size_t dangling_count() const noexcept { return perm.size() - k; }
};

/// Everything the lumped operator needs, in permuted order.
///
/// The dangling rows of the permuted Google matrix are all equal to u^T, so
/// they are carried by u1/u2 alone and never stored.
struct BlockStructure {
  std::size_t k = 0;
  std::size_t n = 0;
  double alpha = 0.0;
  CsrMatrix h11;             // k x k
  CsrMatrix h12;             // k x (n-k)
  std::vector<double> r12;   // row sums of h12
  std::vector<double> v1, v2, w1, w2;
  std::vector<double> u1, u2;
  double u2_sum = 0.0;
  double v2_sum = 0.0;
};

struct PowerResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
};

struct SolveReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double iteration_seconds = 0.0;
  std::vector<double> pagerank;  // original node order
};

inline DanglingPartition detect_dangling(const HyperlinkMatrix& h) {
  const std::size_t n = h.size();
  DanglingPartition p;
  p.perm.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!h.dangling(i)) p.perm.push_back(static_cast<node_t>(i));
  }
  p.k = p.perm.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (h.dangling(i)) p.perm.push_back(static_cast<node_t>(i));
  }
  p.inv_perm.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) p.inv_perm[p.perm[i]] = static_cast<node_t>(i);
  return p;
}

/// Permuted copy of x: out[i] = x[perm[i]].
inline std::vector<double> permute(std::span<const double> x, const DanglingPartition& p) {
  if (x.size() != p.size()) throw DimensionError("permute: length mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[p.perm[i]];
  return out;
}

/// Back to original order: out[perm[i]] = pi_tilde[i].
inline std::vector<double> unpermute(std::span<const double> pi_tilde,
                                     const DanglingPartition& p) {
  if (pi_tilde.size() != p.size()) throw DimensionError("unpermute: length mismatch");
  std::vector<double> out(pi_tilde.size());
  for (std::size_t i = 0; i < pi_tilde.size(); ++i) out[p.perm[i]] = pi_tilde[i];
  return out;
}

inline BlockStructure permute_blocks(const HyperlinkMatrix& h, const DanglingPartition& p,
                                     const PageRankParams& params) {
  const std::size_t n = h.size();
  if (p.size() != n || params.size() != n) throw DimensionError("permute_blocks: size mismatch");
  const std::size_t k = p.k;
  const double alpha = params.alpha();

  BlockStructure b;
  b.k = k;
  b.n = n;
  b.alpha = alpha;

  std::vector<std::size_t> ptr11(k + 1, 0), ptr12(k + 1, 0);
  std::vector<node_t> col11, col12;
  std::vector<double> val11, val12;
  std::vector<std::pair<node_t, double>> row;
  b.r12.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t src = p.perm[i];
    const auto cols = h.csr().row_cols(src);
    const auto vals = h.csr().row_values(src);
    row.clear();
    for (std::size_t q = 0; q < cols.size(); ++q) row.emplace_back(p.inv_perm[cols[q]], vals[q]);
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      if (c < k) {
        col11.push_back(c);
        val11.push_back(v);
      } else {
        col12.push_back(static_cast<node_t>(c - k));
        val12.push_back(v);
        b.r12[i] += v;
      }
    }
    ptr11[i + 1] = col11.size();
    ptr12[i + 1] = col12.size();
  }
  b.h11 = CsrMatrix(k, k, std::move(ptr11), std::move(col11), std::move(val11));
  b.h12 = CsrMatrix(k, n - k, std::move(ptr12), std::move(col12), std::move(val12));

  const auto v = permute(params.v().values(), p);
  const auto w = permute(params.w().values(), p);
  const auto split = [k](const std::vector<double>& x, std::vector<double>& head,
                         std::vector<double>& tail) {
    head.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k));
    tail.assign(x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
  };
  split(v, b.v1, b.v2);
  split(w, b.w1, b.w2);

  b.u1.resize(k);
  for (std::size_t i = 0; i < k; ++i) b.u1[i] = alpha * b.w1[i] + (1.0 - alpha) * b.v1[i];
  b.u2.resize(n - k);
  for (std::size_t i = 0; i < n - k; ++i) b.u2[i] = alpha * b.w2[i] + (1.0 - alpha) * b.v2[i];
  for (double x : b.u2) b.u2_sum += x;
  for (double x : b.v2) b.v2_sum += x;
  return b;
}

/// out = sigma^T G1, where G1 is the (k+1)-order lumped matrix
///   [ alpha H11 + (1-alpha) e v1^T   alpha r12 + (1-alpha) v2_sum e ]
///   [ u1^T                           u2_sum                         ]
/// applied without forming it.
inline void lumped_apply(std::span<const double> sigma, const BlockStructure& b,
                         std::span<double> out) {
  const std::size_t k = b.k;
  if (sigma.size() != k + 1 || out.size() != k + 1) {
    throw DimensionError("lumped_apply: expected vectors of length k+1");
  }
  const auto head = sigma.first(k);
  const double tail = sigma[k];
  const double alpha = b.alpha;

  double head_sum = 0.0;
  double r12_dot = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    head_sum += head[i];
    r12_dot += head[i] * b.r12[i];
  }

  const double teleport = (1.0 - alpha) * head_sum;
  for (std::size_t j = 0; j < k; ++j) out[j] = teleport * b.v1[j] + tail * b.u1[j];
  b.h11.transposed_multiply_add(head, alpha, out.first(k));
  out[k] = alpha * r12_dot + teleport * b.v2_sum + tail * b.u2_sum;
}

inline std::vector<double> lumped_apply(std::span<const double> sigma, const BlockStructure& b) {
  std::vector<double> out(b.k + 1);
  lumped_apply(sigma, b, out);
  return out;
}

/// out = x^T G in original order, G = alpha (H + d w^T) + (1-alpha) e v^T.
inline void full_apply(std::span<const double> x, const HyperlinkMatrix& h,
                       const PageRankParams& params, std::span<double> out) {
  const std::size_t n = h.size();
  if (x.size() != n || out.size() != n || params.size() != n) {
    throw DimensionError("full_apply: length mismatch");
  }
  const double alpha = params.alpha();
  double total = 0.0;
  double dangling_mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += x[i];
    if (h.dangling(i)) dangling_mass += x[i];
  }
  const auto v = params.v().values();
  const auto w = params.w().values();
  const double dw = alpha * dangling_mass;
  const double ev = (1.0 - alpha) * total;
  for (std::size_t j = 0; j < n; ++j) out[j] = dw * w[j] + ev * v[j];
  h.csr().transposed_multiply_add(x, alpha, out);
}

inline std::vector<double> full_apply(std::span<const double> x, const HyperlinkMatrix& h,
                                      const PageRankParams& params) {
  std::vector<double> out(h.size());
  full_apply(x, h, params, out);
  return out;
}

/// Power iteration x_{t+1}^T = x_t^T A with 1-norm renormalization.
///
/// `apply(in, out)` writes in^T A into out. Stops once the 1-norm change
/// drops below tol or after max_iter steps. Two work buffers are allocated
/// up front and reused.
template <class Apply>
PowerResult power_method(Apply&& apply, std::vector<double> x0, double tol,
                         std::size_t max_iter) {
  PowerResult result;
  result.x = std::move(x0);
  std::vector<double> next(result.x.size());
  for (std::size_t t = 1; t <= max_iter; ++t) {
    apply(std::span<const double>(result.x), std::span<double>(next));
    double norm = 0.0;
    for (double y : next) norm += std::abs(y);
    if (!std::isfinite(norm) || norm == 0.0) {
      throw NumericError("power method produced a non-finite or zero iterate");
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] /= norm;
      diff += std::abs(next[i] - result.x[i]);
    }
    result.x.swap(next);
    result.iterations = t;
    result.residual = diff;
    if (diff < tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

/// Stationary vector of the permuted Google matrix from the stationary
/// vector sigma of the lumped matrix: the head is sigma_{1:k}, the tail is
/// sigma^T [G12; u2^T]. No renormalization is applied.
inline std::vector<double> recover_pagerank(std::span<const double> sigma,
                                            const BlockStructure& b) {
  const std::size_t k = b.k;
  if (sigma.size() != k + 1) throw DimensionError("recover_pagerank: expected length k+1");
  std::vector<double> pi(b.n);
  const auto head = sigma.first(k);
  const double tail = sigma[k];
  double head_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    pi[i] = head[i];
    head_sum += head[i];
  }
  std::span<double> out(pi.data() + k, b.n - k);
  const double teleport = (1.0 - b.alpha) * head_sum;
  for (std::size_t j = 0; j < b.n - k; ++j) out[j] = teleport * b.v2[j] + tail * b.u2[j];
  b.h12.transposed_multiply_add(head, b.alpha, out);
  return pi;
}

inline SolveReport solve_full(const HyperlinkMatrix& h, const PageRankParams& params) {
  const std::size_t n = h.size();
  auto apply = [&](std::span<const double> x, std::span<double> y) { full_apply(x, h, params, y); };
  const auto start = std::chrono::steady_clock::now();
  auto run = power_method(apply, std::vector<double>(n, 1.0 / static_cast<double>(n)),
                          params.tol(), params.max_iter());
  SolveReport report;
  report.iteration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.n = n;
  report.k = detect_dangling(h).k;
  report.iterations = run.iterations;
  report.residual = run.residual;
  report.converged = run.converged;
  report.pagerank = std::move(run.x);
  return report;
}

inline SolveReport solve_full(const WebGraph& g, const PageRankParams& params) {
  return solve_full(build_hyperlink_matrix(g), params);
}

/// Intermediate products of the lumped solve, in permuted order.
struct LumpedSolution {
  DanglingPartition partition;
  BlockStructure blocks;
  PowerResult sigma;               // stationary vector of the lumped matrix
  std::vector<double> pi_tilde;    // recovered, permuted order
  double iteration_seconds = 0.0;  // wall time of the power iteration alone
};

/// Lumped power iteration from the uniform start, then recovery. Requires at
/// least one dangling page.
inline LumpedSolution solve_lumped_permuted(const HyperlinkMatrix& h,
                                            const PageRankParams& params) {
  LumpedSolution s;
  s.partition = detect_dangling(h);
  const std::size_t k = s.partition.k;
  if (k == h.size()) throw Error("lumped solve needs at least one dangling node");
  s.blocks = permute_blocks(h, s.partition, params);

  auto apply = [&](std::span<const double> x, std::span<double> y) { lumped_apply(x, s.blocks, y); };
  const auto start = std::chrono::steady_clock::now();
  s.sigma = power_method(apply, std::vector<double>(k + 1, 1.0 / static_cast<double>(k + 1)),
                         params.tol(), params.max_iter());
  s.iteration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  s.pi_tilde = recover_pagerank(s.sigma.x, s.blocks);
  return s;
}

/// Lumped power iteration on the (k+1)-order matrix, then recovery of the
/// dangling scores. Falls back to the full iteration when nothing dangles,
/// and returns u directly when everything does.
inline SolveReport solve_lumped(const HyperlinkMatrix& h, const PageRankParams& params) {
  const std::size_t n = h.size();
  const auto partition = detect_dangling(h);
  if (partition.k == n) return solve_full(h, params);
  if (partition.k == 0) {
    const auto blocks = permute_blocks(h, partition, params);
    SolveReport report;
    report.n = n;
    report.converged = true;
    report.pagerank = unpermute(blocks.u2, partition);
    return report;
  }

  auto s = solve_lumped_permuted(h, params);
  SolveReport report;
  report.n = n;
  report.k = s.partition.k;
  report.iterations = s.sigma.iterations;
  report.residual = s.sigma.residual;
  report.converged = s.sigma.converged;
  report.iteration_seconds = s.iteration_seconds;
  report.pagerank = unpermute(s.pi_tilde, s.partition);
  return report;
}

inline SolveReport solve_lumped(const WebGraph& g, const PageRankParams& params) {
  return solve_lumped(build_hyperlink_matrix(g), params);
}

}  // namespace lumprank
