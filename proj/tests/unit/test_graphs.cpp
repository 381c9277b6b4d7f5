#include <gtest/gtest.h>

#include "graph_oracles.hpp"
#include "jacobi.hpp"
#include "permmap/errors.hpp"
#include "permmap/graphs.hpp"
#include "support.hpp"

using namespace permmap;

namespace {

WeightMatrix sym(const DenseMatrix& m) { return WeightMatrix(m, MatrixKind::symmetric); }

oracle::Mat to_nested(const DenseMatrix& m) {
  oracle::Mat out(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

}  // namespace

TEST(WeightMatrix, Validation) {
  DenseMatrix bad(2, 3);
  bad.setZero();
  EXPECT_THROW(WeightMatrix(bad, MatrixKind::directed), ArgumentError);
  DenseMatrix neg = DenseMatrix::Zero(2, 2);
  neg(0, 1) = neg(1, 0) = -1;
  EXPECT_THROW(sym(neg), ArgumentError);
  DenseMatrix asym = DenseMatrix::Zero(2, 2);
  asym(0, 1) = 1;
  EXPECT_THROW(sym(asym), ArgumentError);
  EXPECT_NO_THROW(WeightMatrix(asym, MatrixKind::directed));
  DenseMatrix nan = DenseMatrix::Zero(2, 2);
  nan(0, 1) = nan(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(sym(nan), ArgumentError);
}

TEST(Laplacian, PathOfThree) {
  DenseMatrix a(3, 3);
  a << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  DenseMatrix expected(3, 3);
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  EXPECT_TRUE(laplacian(sym(a)).values == expected);
}

TEST(Laplacian, SelfLoopsIgnored) {
  DenseMatrix a(2, 2);
  a << 3, 2, 2, 5;
  const auto l = laplacian(sym(a));
  EXPECT_DOUBLE_EQ(l.values(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(l.values(1, 1), 2.0);
  EXPECT_DOUBLE_EQ(l.values.row(0).sum(), 0.0);
}

TEST(Laplacian, RejectsDirected) {
  DenseMatrix a = DenseMatrix::Zero(2, 2);
  a(0, 1) = 1;
  EXPECT_THROW(laplacian(WeightMatrix(a, MatrixKind::directed)), ArgumentError);
}

TEST(Laplacian, SparseMatchesDense) {
  auto g = testing_support::rng(17);
  const DenseMatrix w = testing_support::random_symmetric_weights(g, 15, 0.3);
  const SparseMatrix s = w.sparseView();
  const DenseMatrix ls = DenseMatrix(laplacian(s));
  EXPECT_LE((ls - laplacian(sym(w)).values).cwiseAbs().maxCoeff(), 1e-12);
}

// Zero-eigenvalue count equals component count on disjoint unions of small graphs.
TEST(LaplacianProperties, ZeroEigenvaluesCountComponents) {
  auto g = testing_support::rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int parts = 1 + static_cast<int>(g() % 4);
    std::vector<DenseMatrix> blocks;
    int n = 0;
    for (int p = 0; p < parts; ++p) {
      const int m = 1 + static_cast<int>(g() % 5);
      blocks.push_back(testing_support::random_symmetric_weights(g, m, 0.6));
      n += m;
    }
    DenseMatrix w = DenseMatrix::Zero(n, n);
    int at = 0;
    for (const auto& b : blocks) {
      w.block(at, at, b.rows(), b.cols()) = b;
      at += static_cast<int>(b.rows());
    }
    const auto l = laplacian(sym(w));
    for (int i = 0; i < n; ++i) EXPECT_NEAR(l.values.row(i).sum(), 0.0, 1e-9 * std::max(1.0, l.values.cwiseAbs().maxCoeff()));
    const auto eig = oracle::jacobi_eigen(to_nested(l.values));
    const double lmax = std::max(eig.values.back(), 1e-300);
    std::size_t zeros = 0;
    for (double v : eig.values) zeros += std::abs(v) <= 1e-8 * lmax || lmax < 1e-12;
    EXPECT_EQ(zeros, oracle::component_count(w, static_cast<std::size_t>(n)));
  }
}

TEST(RandomWalk, RowsSumToOne) {
  auto g = testing_support::rng(29);
  DenseMatrix w = testing_support::random_symmetric_weights(g, 10, 0.5);
  for (int i = 0; i < 10; ++i) w(i, (i + 1) % 10) = w((i + 1) % 10, i) = 1.0;  // no isolated rows
  const auto p = random_walk(sym(w));
  const auto lazy = lazy_random_walk(sym(w));
  EXPECT_TRUE(lazy.lazy);
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(p.values.row(i).sum(), 1.0, 1e-12);
    EXPECT_NEAR(lazy.values.row(i).sum(), 1.0, 1e-12);
    EXPECT_EQ(lazy.values(i, i), 0.5);
    EXPECT_EQ(p.values(i, i), 0.0);
  }
}

TEST(RandomWalk, IsolatedNodeNamed) {
  DenseMatrix w = DenseMatrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 1;
  try {
    random_walk(sym(w));
    FAIL() << "expected IsolatedNodeError";
  } catch (const IsolatedNodeError& e) {
    EXPECT_EQ(e.node(), 2u);
  }
  EXPECT_THROW(lazy_random_walk(sym(w)), IsolatedNodeError);
}

TEST(SymmetrizeProperties, Idempotent) {
  auto g = testing_support::rng(31);
  for (int t = 0; t < 30; ++t) {
    DenseMatrix m(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) m(i, j) = testing_support::uniform(g, 0, 3);
    const auto once = symmetrize(m);
    const auto twice = symmetrize(once.values());
    EXPECT_TRUE(once.values() == twice.values());
    const SparseMatrix s = m.sparseView();
    const DenseMatrix ss = DenseMatrix(symmetrize(symmetrize(s)));
    EXPECT_LE((ss - once.values()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(MeanNonzeroNormalize, WorkedExample) {
  DenseMatrix a(3, 3);
  a << 0, 2, 0, 2, 0, 4, 0, 4, 0;  // mean of nonzeros = 3
  const auto n = mean_nonzero_normalize(sym(a));
  EXPECT_DOUBLE_EQ(n(0, 1), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(n(1, 2), 4.0 / 3.0);
  EXPECT_EQ(n(0, 2), 0.0);
  EXPECT_THROW(mean_nonzero_normalize(WeightMatrix::zeros(3, MatrixKind::symmetric)), ArgumentError);
}

TEST(MeanNonzeroNormalizeProperties, PreservesPatternAndRatios) {
  auto g = testing_support::rng(37);
  for (int t = 0; t < 30; ++t) {
    const DenseMatrix w = testing_support::random_symmetric_weights(g, 9, 0.4);
    if (w.maxCoeff() == 0.0) continue;
    const auto n = mean_nonzero_normalize(sym(w));
    double first = 0.0;
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) {
        EXPECT_EQ(w(i, j) == 0.0, n(i, j) == 0.0);
        if (w(i, j) == 0.0) continue;
        const double ratio = n(i, j) / w(i, j);
        if (first == 0.0) first = ratio;
        EXPECT_NEAR(ratio, first, 1e-12 * first);
      }
  }
}
