#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <random>
#include <vector>

#include "lumprank/error.hpp"
#include "lumprank/graph.hpp"

namespace lumprank {

struct GeneratorOptions {
  std::size_t nodes = 100;
  double dangling_frac = 0.5;
  std::size_t avg_degree = 8;
  std::uint64_t seed = 1;
};

/// Random web graph with a prescribed share of dangling pages.
///
/// ceil((1 - frac) * nodes) pages, chosen by a seeded shuffle, get an
/// out-degree uniform in [1, 2 * avg_degree - 1] with targets uniform over
/// all pages; repeated targets collapse, so every such page keeps at least
/// one outlink. The rest get none.
inline WebGraph random_web_graph(const GeneratorOptions& opt) {
  if (!(opt.dangling_frac >= 0.0 && opt.dangling_frac <= 1.0)) {
    throw Error("dangling fraction must lie in [0, 1]");
  }
  if (opt.nodes == 0) throw Error("node count must be positive");
  if (opt.avg_degree < 1) throw Error("average degree must be at least 1");

  std::mt19937_64 rng(opt.seed);
  const double linked = (1.0 - opt.dangling_frac) * static_cast<double>(opt.nodes);
  const auto nondangling =
      std::min(opt.nodes, static_cast<std::size_t>(std::ceil(linked - 1e-9)));

  std::vector<node_t> order(opt.nodes);
  std::iota(order.begin(), order.end(), node_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::uniform_int_distribution<std::size_t> degree(1, 2 * opt.avg_degree - 1);
  std::uniform_int_distribution<node_t> target(0, static_cast<node_t>(opt.nodes - 1));
  std::vector<std::vector<node_t>> out(opt.nodes);
  std::vector<node_t> linked_nodes(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(nondangling));
  std::sort(linked_nodes.begin(), linked_nodes.end());
  for (node_t src : linked_nodes) {
    const std::size_t d = degree(rng);
    out[src].reserve(d);
    for (std::size_t i = 0; i < d; ++i) out[src].push_back(target(rng));
  }
  return WebGraph(std::move(out));
}

/// One "src dst" line per edge, labels as stored in the graph.
inline void write_edge_list(const WebGraph& g, std::ostream& os) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (node_t t : g.out(i)) os << g.label(i) << ' ' << g.label(t) << '\n';
  }
}

}  // namespace lumprank
