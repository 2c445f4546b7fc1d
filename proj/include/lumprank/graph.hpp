#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lumprank/error.hpp"
#include "lumprank/sparse.hpp"

namespace lumprank {

using label_t = std::uint64_t;
using Adjacency = std::vector<std::vector<node_t>>;

/// Directed link structure over n pages with external labels.
///
/// Internal indices are dense in [0, n). Out-edge lists keep their insertion
/// order with duplicates dropped; every target must be a valid index.
class WebGraph {
 public:
  WebGraph() = default;

  /// `labels` may be empty, in which case node i carries label i.
  explicit WebGraph(std::vector<std::vector<node_t>> out_edges,
                    std::vector<label_t> labels = {})
      : out_edges_(std::move(out_edges)), labels_(std::move(labels)) {
    const std::size_t n = out_edges_.size();
    if (labels_.empty()) {
      labels_.resize(n);
      for (std::size_t i = 0; i < n; ++i) labels_[i] = i;
    }
    if (labels_.size() != n) throw DimensionError("label count differs from node count");
    index_of_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!index_of_.emplace(labels_[i], static_cast<node_t>(i)).second) {
        throw Error("duplicate node label " + std::to_string(labels_[i]));
      }
    }
    std::unordered_set<node_t> seen;
    for (auto& targets : out_edges_) {
      seen.clear();
      std::vector<node_t> unique;
      unique.reserve(targets.size());
      for (node_t t : targets) {
        if (t >= n) throw DimensionError("edge target out of range");
        if (seen.insert(t).second) unique.push_back(t);
      }
      targets = std::move(unique);
    }
  }

  std::size_t size() const noexcept { return out_edges_.size(); }

  std::span<const node_t> out(std::size_t i) const { return out_edges_[i]; }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& t : out_edges_) m += t.size();
    return m;
  }

  label_t label(std::size_t i) const { return labels_[i]; }
  std::span<const label_t> labels() const noexcept { return labels_; }

  std::optional<node_t> index_of(label_t label) const {
    auto it = index_of_.find(label);
    if (it == index_of_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::vector<node_t>> out_edges_;
  std::vector<label_t> labels_;
  std::unordered_map<label_t, node_t> index_of_;
};

/// Row-normalized link matrix: row i holds 1/n_i at each of its n_i targets,
/// dangling rows are stored empty.
class HyperlinkMatrix {
 public:
  HyperlinkMatrix() = default;

  explicit HyperlinkMatrix(CsrMatrix rows) : rows_(std::move(rows)) {
    if (rows_.rows() != rows_.cols()) throw DimensionError("hyperlink matrix must be square");
    for (std::size_t i = 0; i < rows_.rows(); ++i) {
      const auto vals = rows_.row_values(i);
      if (vals.empty()) continue;
      const double expected = 1.0 / static_cast<double>(vals.size());
      for (double v : vals) {
        if (v != expected) throw Error("hyperlink row " + std::to_string(i) + " is not uniform");
      }
    }
  }

  std::size_t size() const noexcept { return rows_.rows(); }
  const CsrMatrix& csr() const noexcept { return rows_; }
  bool dangling(std::size_t i) const { return rows_.row_empty(i); }

 private:
  CsrMatrix rows_;
};

/// Nonnegative vector of unit 1-norm.
class ProbabilityVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  ProbabilityVector() = default;

  explicit ProbabilityVector(std::vector<double> entries) : entries_(std::move(entries)) {
    // Neumaier summation: a plain running sum of 1e5 equal entries already
    // drifts by ~1e-12.
    double sum = 0.0, carry = 0.0;
    for (double x : entries_) {
      if (!std::isfinite(x) || x < 0.0) throw Error("probability vector has a negative or non-finite entry");
      const double t = sum + x;
      carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    }
    sum += carry;
    if (std::abs(sum - 1.0) > kSumTolerance) throw Error("probability vector does not sum to 1");
  }

  static ProbabilityVector uniform(std::size_t n) {
    if (n == 0) throw Error("uniform vector of length 0");
    return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> values() const noexcept { return entries_; }

 private:
  std::vector<double> entries_;
};

/// Damping factor, teleportation and dangling distributions, stopping rule.
class PageRankParams {
 public:
  PageRankParams(double alpha, ProbabilityVector v, ProbabilityVector w, double tol,
                 std::size_t max_iter)
      : alpha_(alpha), v_(std::move(v)), w_(std::move(w)), tol_(tol), max_iter_(max_iter) {
    if (!(alpha_ > 0.0 && alpha_ < 1.0)) throw Error("alpha must lie in (0, 1)");
    if (!(tol_ > 0.0)) throw Error("tol must be positive");
    if (max_iter_ < 1) throw Error("max_iter must be at least 1");
    if (v_.size() != w_.size()) throw DimensionError("v and w differ in length");
  }

  static PageRankParams uniform(std::size_t n, double alpha, double tol = 1e-10,
                                std::size_t max_iter = 1000) {
    return {alpha, ProbabilityVector::uniform(n), ProbabilityVector::uniform(n), tol, max_iter};
  }

  double alpha() const noexcept { return alpha_; }
  const ProbabilityVector& v() const noexcept { return v_; }
  const ProbabilityVector& w() const noexcept { return w_; }
  double tol() const noexcept { return tol_; }
  std::size_t max_iter() const noexcept { return max_iter_; }
  std::size_t size() const noexcept { return v_.size(); }

  PageRankParams with_tol(double tol) const {
    return {alpha_, v_, w_, tol, max_iter_};
  }
  PageRankParams with_max_iter(std::size_t max_iter) const {
    return {alpha_, v_, w_, tol_, max_iter};
  }

 private:
  double alpha_;
  ProbabilityVector v_;
  ProbabilityVector w_;
  double tol_;
  std::size_t max_iter_;
};

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

inline std::optional<label_t> parse_label(std::string_view tok) {
  label_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Reads "src dst" lines. Blank lines and lines whose first non-blank
/// character is '#' are skipped. Labels are renumbered in order of first
/// appearance; repeated edges collapse, self-loops stay.
inline WebGraph parse_edge_list(std::string_view text) {
  std::vector<std::vector<node_t>> out;
  std::vector<label_t> labels;
  std::unordered_map<label_t, node_t> index;
  auto intern = [&](label_t label) {
    auto [it, inserted] = index.emplace(label, static_cast<node_t>(labels.size()));
    if (inserted) {
      labels.push_back(label);
      out.emplace_back();
    }
    return it->second;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    const auto tokens = detail::split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2) {
      throw ParseError(line_no, "expected two node labels, found " +
                                    std::to_string(tokens.size()) + " tokens");
    }
    const auto src = detail::parse_label(tokens[0]);
    const auto dst = detail::parse_label(tokens[1]);
    if (!src || !dst) throw ParseError(line_no, "node labels must be non-negative integers");
    const node_t s = intern(*src);
    const node_t d = intern(*dst);
    out[s].push_back(d);
  }
  if (labels.empty()) throw ParseError(0, "edge list contains no edges");
  return WebGraph(std::move(out), std::move(labels));
}

inline WebGraph parse_edge_list(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_edge_list(std::string_view(text));
}

inline HyperlinkMatrix build_hyperlink_matrix(const WebGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<node_t> cols;
  std::vector<double> vals;
  cols.reserve(g.edge_count());
  vals.reserve(g.edge_count());
  for (std::size_t i = 0; i < n; ++i) {
    auto targets = g.out(i);
    const std::size_t first = cols.size();
    cols.insert(cols.end(), targets.begin(), targets.end());
    std::sort(cols.begin() + static_cast<std::ptrdiff_t>(first), cols.end());
    const double weight = targets.empty() ? 0.0 : 1.0 / static_cast<double>(targets.size());
    vals.insert(vals.end(), targets.size(), weight);
    row_ptr[i + 1] = cols.size();
  }
  return HyperlinkMatrix(CsrMatrix(n, n, std::move(row_ptr), std::move(cols), std::move(vals)));
}

/// "uniform" or whitespace-separated nonnegative numbers, rescaled to sum 1.
inline ProbabilityVector load_weight_vector(std::string_view source, std::size_t n) {
  if (n == 0) throw Error("weight vector of length 0");
  const auto tokens = detail::split_ws(source);
  if (tokens.size() == 1 && tokens.front() == "uniform") return ProbabilityVector::uniform(n);
  if (tokens.size() != n) {
    throw ParseError(0, "weight vector has " + std::to_string(tokens.size()) +
                            " entries, expected " + std::to_string(n));
  }
  std::vector<double> entries;
  entries.reserve(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string tok(tokens[i]);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(x)) {
      throw ParseError(0, "weight entry " + std::to_string(i + 1) + " is not a number");
    }
    if (x < 0.0) throw ParseError(0, "weight entry " + std::to_string(i + 1) + " is negative");
    entries.push_back(x);
    sum += x;
  }
  if (sum == 0.0) throw Error("weight vector is all zero");
  if (sum < 1e-9 || sum > 1e9) throw Error("weight vector sum out of range [1e-9, 1e9]");
  for (double& x : entries) x /= sum;
  // Division can leave the sum a few ulps away from 1; put the residue on
  // the largest entry.
  double total = 0.0;
  for (double x : entries) total += x;
  auto largest = std::max_element(entries.begin(), entries.end());
  *largest = std::max(0.0, *largest + (1.0 - total));
  return ProbabilityVector(std::move(entries));
}

}  // namespace lumprank
