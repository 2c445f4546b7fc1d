#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lumprank/generate.hpp"
#include "lumprank/graph.hpp"

using namespace lumprank;

namespace {

std::vector<node_t> out_of(const WebGraph& g, std::size_t i) {
  auto s = g.out(i);
  return {s.begin(), s.end()};
}

}  // namespace

TEST(ParseEdgeList, RenumbersInFirstAppearanceOrder) {
  const auto g = parse_edge_list("1 2\n1 3\n2 1");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(out_of(g, 0), (std::vector<node_t>{1, 2}));
  EXPECT_EQ(out_of(g, 1), (std::vector<node_t>{0}));
  EXPECT_TRUE(g.out(2).empty());
  EXPECT_EQ(g.label(0), 1u);
  EXPECT_EQ(g.label(2), 3u);
}

TEST(ParseEdgeList, KeepsSelfLoop) {
  const auto g = parse_edge_list("7 7");
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(out_of(g, 0), (std::vector<node_t>{0}));
  EXPECT_EQ(g.label(0), 7u);
}

TEST(ParseEdgeList, CollapsesDuplicates) {
  const auto g = parse_edge_list("1 2\n1 2\n");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(out_of(g, 0), (std::vector<node_t>{1}));
  EXPECT_EQ(g.edge_count(), 1u);
}

TEST(ParseEdgeList, SkipsCommentsAndBlankLinesWithMixedWhitespace) {
  const auto g = parse_edge_list("# header\n\n  \t\n10\t20\r\n   # indented comment\n20    10\n");
  EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(ParseEdgeList, ReportsLineOfMalformedInput) {
  try {
    parse_edge_list("1 2\n# ok\n3 x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_edge_list("1 2 3\n"), ParseError);
  EXPECT_THROW(parse_edge_list("1\n"), ParseError);
  EXPECT_THROW(parse_edge_list("-1 2\n"), ParseError);
  EXPECT_THROW(parse_edge_list("1.5 2\n"), ParseError);
}

TEST(ParseEdgeList, RejectsEmptyInput) {
  EXPECT_THROW(parse_edge_list(""), ParseError);
  EXPECT_THROW(parse_edge_list("# nothing\n\n"), ParseError);
}

TEST(ParseEdgeList, LabelRoundTrip) {
  const auto g = parse_edge_list("100 5\n5 42\n42 100\n7 5\n");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.index_of(g.label(i));
    ASSERT_TRUE(idx.has_value());
    EXPECT_EQ(*idx, i);
  }
  EXPECT_FALSE(g.index_of(999).has_value());
}

TEST(WebGraph, RejectsOutOfRangeTargets) {
  EXPECT_THROW(WebGraph(Adjacency{{0, 3}, {}}), DimensionError);
}

TEST(HyperlinkMatrix, RowsAreUniformOverOutlinks) {
  const auto h = build_hyperlink_matrix(WebGraph(Adjacency{{1, 2}, {}, {0}}));
  const auto& csr = h.csr();
  ASSERT_EQ(csr.row_size(0), 2u);
  EXPECT_EQ(csr.row_cols(0)[0], 1u);
  EXPECT_EQ(csr.row_cols(0)[1], 2u);
  EXPECT_EQ(csr.row_values(0)[0], 0.5);
  EXPECT_EQ(csr.row_values(0)[1], 0.5);
  EXPECT_TRUE(h.dangling(1));
  EXPECT_EQ(csr.row_size(1), 0u);
  EXPECT_EQ(csr.row_values(2)[0], 1.0);
}

TEST(HyperlinkMatrix, SelfLoopOnlyIsNotDangling) {
  const auto h = build_hyperlink_matrix(WebGraph(Adjacency{{0}}));
  EXPECT_FALSE(h.dangling(0));
  EXPECT_EQ(h.csr().row_values(0)[0], 1.0);
}

TEST(HyperlinkMatrix, NonemptyRowsSumToOneOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = random_web_graph({150, 0.4, 5, seed});
    const auto h = build_hyperlink_matrix(g);
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h.dangling(i)) continue;
      EXPECT_NEAR(h.csr().row_sum(i), 1.0, 1e-12);
      const double expected = 1.0 / static_cast<double>(h.csr().row_size(i));
      for (double v : h.csr().row_values(i)) EXPECT_EQ(v, expected);
    }
  }
}

TEST(HyperlinkMatrix, ParseThenBuildIsDeterministic) {
  const std::string text = "3 1\n1 2\n2 3\n3 2\n4 1\n";
  const auto a = build_hyperlink_matrix(parse_edge_list(text));
  const auto b = build_hyperlink_matrix(parse_edge_list(text));
  ASSERT_EQ(a.csr().nnz(), b.csr().nnz());
  for (std::size_t p = 0; p < a.csr().nnz(); ++p) {
    EXPECT_EQ(a.csr().col_idx()[p], b.csr().col_idx()[p]);
    EXPECT_EQ(a.csr().values()[p], b.csr().values()[p]);
  }
}

TEST(LoadWeightVector, Uniform) {
  const auto v = load_weight_vector("uniform", 4);
  for (double x : v.values()) EXPECT_EQ(x, 0.25);
}

TEST(LoadWeightVector, Renormalizes) {
  const auto v = load_weight_vector("2 1 1", 3);
  EXPECT_DOUBLE_EQ(v[0], 0.5);
  EXPECT_DOUBLE_EQ(v[1], 0.25);
  EXPECT_DOUBLE_EQ(v[2], 0.25);
}

TEST(LoadWeightVector, AllowsZerosAndAcceptsSmallDrift) {
  const auto v = load_weight_vector("0 0.5000000001\n0.5", 3);
  EXPECT_EQ(v[0], 0.0);
  EXPECT_NEAR(v[1] + v[2], 1.0, 1e-15);
}

TEST(LoadWeightVector, Errors) {
  EXPECT_THROW(load_weight_vector("1 -1 1", 3), ParseError);
  EXPECT_THROW(load_weight_vector("1 1", 3), ParseError);
  EXPECT_THROW(load_weight_vector("0 0 0", 3), Error);
  EXPECT_THROW(load_weight_vector("1 abc 1", 3), ParseError);
  EXPECT_THROW(load_weight_vector("1e-12 0 0", 3), Error);
  EXPECT_THROW(load_weight_vector("1e12 0 0", 3), Error);
}

TEST(ProbabilityVector, Validates) {
  EXPECT_THROW(ProbabilityVector({0.5, 0.6}), Error);
  EXPECT_THROW(ProbabilityVector({1.5, -0.5}), Error);
  EXPECT_NO_THROW(ProbabilityVector({0.0, 1.0}));
}

TEST(PageRankParams, Validates) {
  const auto u = ProbabilityVector::uniform(2);
  EXPECT_THROW(PageRankParams(0.0, u, u, 1e-8, 10), Error);
  EXPECT_THROW(PageRankParams(1.0, u, u, 1e-8, 10), Error);
  EXPECT_THROW(PageRankParams(0.5, u, u, 0.0, 10), Error);
  EXPECT_THROW(PageRankParams(0.5, u, u, 1e-8, 0), Error);
  EXPECT_THROW(PageRankParams(0.5, u, ProbabilityVector::uniform(3), 1e-8, 10), DimensionError);
}

TEST(Generator, AllDanglingGivesNoEdges) {
  const auto g = random_web_graph({10, 1.0, 4, 3});
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_EQ(g.size(), 10u);
}

TEST(Generator, DeterministicForSeed) {
  std::ostringstream a, b;
  write_edge_list(random_web_graph({10, 0.5, 3, 7}), a);
  write_edge_list(random_web_graph({10, 0.5, 3, 7}), b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_FALSE(a.str().empty());
}

TEST(Generator, DanglingShareMatchesRequest) {
  const auto g = random_web_graph({100, 0.3, 8, 11});
  std::size_t linked = 0;
  for (std::size_t i = 0; i < g.size(); ++i) linked += g.out(i).empty() ? 0 : 1;
  EXPECT_EQ(linked, 70u);
  EXPECT_THROW(random_web_graph({10, 1.5, 3, 1}), Error);
  EXPECT_THROW(random_web_graph({10, -0.1, 3, 1}), Error);
}
