#include <gtest/gtest.h>

#include <random>

#include "lumprank/transform.hpp"
#include "oracle.hpp"

using namespace lumprank;

namespace {

struct Instance {
  WebGraph graph;
  PageRankParams params;
  DanglingPartition partition;
  DenseMatrix gt;
};

Instance make_instance(WebGraph g, double alpha) {
  auto params = PageRankParams::uniform(g.size(), alpha);
  auto partition = detect_dangling(build_hyperlink_matrix(g));
  auto gt = build_dense_google(g, params, partition);
  return {std::move(g), std::move(params), std::move(partition), std::move(gt)};
}

Instance three_node() { return make_instance(WebGraph(Adjacency{{1, 2}, {0}, {}}), 0.5); }

void expect_matrix_near(const DenseMatrix& a, const DenseMatrix& b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LE(max_abs_diff(a, b), tol);
}

}  // namespace

TEST(BuildTransform, Averaging) {
  const DenseMatrix expected{{1, 0, 0}, {-1.0 / 3, 2.0 / 3, -1.0 / 3}, {-1.0 / 3, -1.0 / 3, 2.0 / 3}};
  expect_matrix_near(build_transform(TransformKind::Averaging, 3), expected, 0.0);
}

TEST(BuildTransform, SparseElim) {
  const DenseMatrix expected{{1, 0, 0}, {-1, 1, 0}, {-1, 0, 1}};
  expect_matrix_near(build_transform(TransformKind::SparseElim, 3), expected, 0.0);
}

TEST(BuildTransform, JordanDiff) {
  const DenseMatrix expected{{1, 0, 0}, {-1, 1, 0}, {0, -1, 1}};
  expect_matrix_near(build_transform(TransformKind::JordanDiff, 3), expected, 0.0);
}

TEST(BuildTransform, OrderOneIsIdentityForEveryKind) {
  for (auto kind : kBuiltinTransforms) {
    const auto l = build_transform(kind, 1);
    ASSERT_EQ(l.rows(), 1u);
    EXPECT_EQ(l(0, 0), 1.0);
  }
  EXPECT_THROW(build_transform(TransformKind::Averaging, 0), DimensionError);
  EXPECT_THROW(build_transform(TransformKind::Custom, 3), Error);
  EXPECT_THROW(build_custom_transform(DenseMatrix(2, 3)), DimensionError);
}

TEST(VerifyTransformCondition, BuiltinsPassUpToOrderFifty) {
  for (auto kind : kBuiltinTransforms) {
    for (std::size_t m = 1; m <= 50; ++m) {
      const auto r = verify_transform_condition(build_transform(kind, m), 1e-12);
      EXPECT_TRUE(r.passed) << to_string(kind) << " m=" << m << " " << r.detail;
    }
  }
}

TEST(VerifyTransformCondition, IdentityFails) {
  for (std::size_t m = 2; m <= 6; ++m) {
    const auto r = verify_transform_condition(build_custom_transform(DenseMatrix::identity(m)), 1e-12);
    EXPECT_FALSE(r.passed);
  }
}

TEST(VerifyTransformCondition, SingularFails) {
  const auto r = verify_transform_condition(build_custom_transform(DenseMatrix{{1, 0}, {-1, 0}}), 1e-12);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.detail.find("singular"), std::string::npos);
}

TEST(VerifyTransformCondition, AcceptsAnotherValidCustomMatrix) {
  // Rows of L e must be e_1: first row sums to 1, the others to 0.
  const DenseMatrix l{{2, -1, 0}, {1, -2, 1}, {0, 3, -3}};
  EXPECT_FALSE(LuFactorization(l).singular());
  EXPECT_TRUE(verify_transform_condition(build_custom_transform(l), 1e-12).passed);
}

TEST(BuildDenseGoogle, ThreeNode) {
  const auto inst = three_node();
  const DenseMatrix expected{{1.0 / 6, 5.0 / 12, 5.0 / 12}, {2.0 / 3, 1.0 / 6, 1.0 / 6},
                             {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  expect_matrix_near(inst.gt, expected, 1e-15);
}

TEST(BuildDenseGoogle, StochasticAndAgreesWithFullApply) {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = make_instance(oracle::random_mixed_graph(12 + seed, 0.5, seed), 0.85);
    for (double s : inst.gt.row_sums()) EXPECT_NEAR(s, 1.0, 1e-12);

    const std::size_t n = inst.gt.rows();
    std::vector<double> x(n);
    std::exponential_distribution<double> e;
    double total = 0.0;
    for (double& v : x) total += (v = e(rng));
    for (double& v : x) v /= total;
    const auto h = build_hyperlink_matrix(inst.graph);
    const auto dense = inst.gt.left_multiply(permute(x, inst.partition));
    const auto sparse = permute(full_apply(x, h, inst.params), inst.partition);
    EXPECT_LE(max_abs_diff(dense, sparse), 1e-12);
  }
}

TEST(BuildDenseGoogle, SizeLimit) {
  const auto g = oracle::random_graph(30, 0.5, 1);
  const auto params = PageRankParams::uniform(30, 0.85);
  const auto p = detect_dangling(build_hyperlink_matrix(g));
  EXPECT_THROW(build_dense_google(g, params, p, 29), SizeLimitError);
  EXPECT_NO_THROW(build_dense_google(g, params, p, 30));
}

TEST(SimilarityTransform, LumpedBlockIsTransformIndependent) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto inst = make_instance(oracle::random_mixed_graph(8 + 2 * seed, 0.5, 40 + seed), 0.85);
    const std::size_t n = inst.gt.rows();
    const std::size_t k = inst.partition.k;
    const auto direct = lumped_matrix(inst.gt, k);
    std::vector<SimilarityResult> results;
    for (auto kind : kBuiltinTransforms) {
      auto r = similarity_transform(inst.gt, build_transform(kind, n - k), k);
      expect_matrix_near(r.lumped, direct, 1e-12);
      EXPECT_TRUE(check_block_triangular(r.full, k, 1e-12).passed);
      EXPECT_EQ(r.coupling.rows(), k + 1);
      EXPECT_EQ(r.coupling.cols(), n - k - 1);
      results.push_back(std::move(r));
    }
    for (std::size_t a = 0; a < results.size(); ++a) {
      for (std::size_t b = a + 1; b < results.size(); ++b) {
        EXPECT_LE(max_abs_diff(results[a].lumped, results[b].lumped), 1e-12);
      }
    }
  }
}

TEST(SimilarityTransform, CouplingBlockDependsOnTransform) {
  // Three dangling nodes so the coupling block has two columns.
  const auto inst = make_instance(WebGraph(Adjacency{{1, 3}, {0, 2, 4}, {}, {}, {}}), 0.85);
  const std::size_t k = inst.partition.k;
  ASSERT_EQ(inst.gt.rows() - k, 3u);
  const auto avg = similarity_transform(inst.gt, build_transform(TransformKind::Averaging, 3), k);
  const auto elim = similarity_transform(inst.gt, build_transform(TransformKind::SparseElim, 3), k);
  EXPECT_GT(max_abs_diff(avg.coupling, elim.coupling), 1e-3);
}

TEST(SimilarityTransform, SingleDanglingNodeIsIdentityTransform) {
  const auto inst = three_node();
  const auto r = similarity_transform(inst.gt, build_transform(TransformKind::Averaging, 1), 2);
  expect_matrix_near(r.lumped, inst.gt, 1e-15);
  EXPECT_EQ(r.coupling.cols(), 0u);
}

TEST(SimilarityTransform, RejectsBadInputs) {
  const auto inst = three_node();
  EXPECT_THROW(similarity_transform(inst.gt, DenseMatrix::identity(2), 2), DimensionError);
  EXPECT_THROW(similarity_transform(inst.gt, DenseMatrix{{0}}, 2), NumericError);
}

TEST(SimilarityTransform, SparseElimMatchesClosedForm) {
  // With L = I - e_hat e_1^T, L^{-1} = I + e_hat e_1^T and
  //   X G X^{-1} = [ G11   G12 e   G12 (I + e_hat e_1^T) [e_2..e_m] ]
  //                [ u1^T  u2^T e  u2^T (I + e_hat e_1^T) [e_2..e_m] ]
  //                [ 0     0       0                                ]
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = make_instance(oracle::random_mixed_graph(10 + seed, 0.6, 200 + seed), 0.7);
    const auto& gt = inst.gt;
    const std::size_t n = gt.rows();
    const std::size_t k = inst.partition.k;
    const std::size_t m = n - k;

    oracle::Matrix linv(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) linv[i][i] = 1.0;
    for (std::size_t i = 1; i < m; ++i) linv[i][0] += 1.0;

    DenseMatrix expected(n, n);
    for (std::size_t i = 0; i <= k; ++i) {
      for (std::size_t j = 0; j < k; ++j) expected(i, j) = gt(i, j);
      double tail = 0.0;
      for (std::size_t j = k; j < n; ++j) tail += gt(i, j);
      expected(i, k) = tail;
      for (std::size_t c = 1; c < m; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < m; ++r) s += gt(i, k + r) * linv[r][c];
        expected(i, k + c) = s;
      }
    }
    const auto r = similarity_transform(gt, build_transform(TransformKind::SparseElim, m), k);
    expect_matrix_near(r.full, expected, 1e-12);
  }
}

TEST(SpectrumIdentity, HoldsForAllTransforms) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = make_instance(oracle::random_mixed_graph(6 + 4 * seed, 0.5, 300 + seed), 0.85);
    const std::size_t k = inst.partition.k;
    for (auto kind : kBuiltinTransforms) {
      const auto r = similarity_transform(inst.gt, build_transform(kind, inst.gt.rows() - k), k);
      const auto report = check_spectrum_identity(inst.gt, r.lumped, k, 1e-8, seed);
      EXPECT_TRUE(report.passed) << report.detail << " dev=" << report.max_abs_deviation;
    }
  }
}

TEST(SpectrumIdentity, AllDanglingTwoNodeAtTwo) {
  const auto inst = make_instance(WebGraph(Adjacency{{}, {}}), 0.85);
  ASSERT_EQ(inst.partition.k, 0u);
  DenseMatrix shifted = -1.0 * inst.gt;
  shifted(0, 0) += 2.0;
  shifted(1, 1) += 2.0;
  EXPECT_NEAR(determinant(shifted), 2.0, 1e-14);
  const auto g1 = lumped_matrix(inst.gt, 0);
  ASSERT_EQ(g1.rows(), 1u);
  EXPECT_NEAR(g1(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(2.0 * (2.0 - g1(0, 0)), 2.0, 1e-14);
  EXPECT_TRUE(check_spectrum_identity(inst.gt, g1, 0, 1e-12).passed);
}

TEST(SpectrumIdentity, CorruptedLumpedMatrixFails) {
  const auto inst = make_instance(oracle::random_mixed_graph(20, 0.5, 5), 0.85);
  auto g1 = lumped_matrix(inst.gt, inst.partition.k);
  g1(0, 0) += 0.1;
  EXPECT_FALSE(check_spectrum_identity(inst.gt, g1, inst.partition.k, 1e-8).passed);
}

TEST(SpectrumIdentity, SeedIsRecorded) {
  const auto inst = three_node();
  const auto r = check_spectrum_identity(inst.gt, lumped_matrix(inst.gt, 2), 2, 1e-8, 1234);
  EXPECT_NE(r.detail.find("seed=1234"), std::string::npos);
}

TEST(CheckLumpable, ConstructedConstantRowSums) {
  const DenseMatrix m{{0, 0.5, 0.25, 0.25},
                      {0.5, 0, 0.25, 0.25},
                      {1.0 / 3, 1.0 / 3, 1.0 / 6, 1.0 / 6},
                      {1.0 / 3, 1.0 / 3, 1.0 / 6, 1.0 / 6}};
  EXPECT_TRUE(check_lumpable(m, {2}, 1e-12).passed);
}

TEST(CheckLumpable, MovingMassWithinTheBlockKeepsLumpability) {
  // Entries (1,3), (1,4) set to 1/3, 1/6: the block row sum stays 1/2.
  const DenseMatrix m{{0, 0.5, 1.0 / 3, 1.0 / 6},
                      {0.5, 0, 0.25, 0.25},
                      {1.0 / 3, 1.0 / 3, 1.0 / 6, 1.0 / 6},
                      {1.0 / 3, 1.0 / 3, 1.0 / 6, 1.0 / 6}};
  EXPECT_TRUE(check_lumpable(m, {2}, 1e-12).passed);
}

TEST(CheckLumpable, UnequalBlockRowSumsFail) {
  const DenseMatrix m{{0, 5.0 / 12, 1.0 / 3, 0.25},
                      {0.5, 0, 0.25, 0.25},
                      {1.0 / 3, 1.0 / 3, 1.0 / 6, 1.0 / 6},
                      {1.0 / 3, 1.0 / 3, 1.0 / 6, 1.0 / 6}};
  const auto r = check_lumpable(m, {2}, 1e-12);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.max_abs_deviation, 1.0 / 12, 1e-15);
}

TEST(CheckLumpable, GooglePartitionDanglingBlockAlwaysPasses) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = make_instance(oracle::random_mixed_graph(15, 0.5, 500 + seed), 0.85);
    const auto blocks = lumpability_blocks(inst.gt, {inst.partition.k}, 1e-12);
    ASSERT_EQ(blocks.size(), 2u);
    for (const auto& b : blocks) {
      if (b.row_block == 1) {
        EXPECT_TRUE(b.passed);
      }
    }
  }
}

TEST(CheckLumpable, BadCutPoints) {
  const auto m = DenseMatrix::identity(4);
  EXPECT_THROW(check_lumpable(m, {0}, 1e-12), DimensionError);
  EXPECT_THROW(check_lumpable(m, {4}, 1e-12), DimensionError);
  EXPECT_THROW(check_lumpable(m, {2, 2}, 1e-12), DimensionError);
  EXPECT_THROW(check_lumpable(m, {3, 1}, 1e-12), DimensionError);
}

TEST(LumpedMatrix, DenseStationaryMatchesSparseSigma) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = oracle::random_mixed_graph(10 + 3 * seed, 0.5, 600 + seed);
    const auto params = PageRankParams::uniform(g.size(), 0.85, 1e-13, 100000);
    const auto s = solve_lumped_permuted(build_hyperlink_matrix(g), params);
    const auto gt = build_dense_google(g, params, s.partition);
    const auto sigma = stationary_distribution(lumped_matrix(gt, s.partition.k));
    EXPECT_LE(max_abs_diff(sigma, s.sigma.x), 1e-8);
  }
}
