#include "permmap/graphs.hpp"

#include <vector>

#include "permmap/errors.hpp"

namespace permmap {

LaplacianMatrix laplacian(const WeightMatrix& weights) {
  if (!weights.is_symmetric()) throw ArgumentError("laplacian: weight matrix is directed; symmetrize first");
  DenseMatrix a = weights.values();
  a.diagonal().setZero();
  LaplacianMatrix l{-a};
  l.values.diagonal() = a.rowwise().sum();
  return l;
}

SparseMatrix laplacian(const SparseMatrix& weights) {
  if (weights.rows() != weights.cols()) throw ArgumentError("laplacian: matrix must be square");
  if (relative_asymmetry(weights) > 1e-12) throw ArgumentError("laplacian: matrix is not symmetric");
  const Eigen::Index n = weights.rows();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(weights.nonZeros() + n));
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(n);
  for (Eigen::Index col = 0; col < weights.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(weights, col); it; ++it) {
      if (it.row() == it.col()) continue;
      if (it.value() < 0.0) throw ArgumentError("laplacian: negative weight");
      degree(it.row()) += it.value();
      triplets.emplace_back(it.row(), it.col(), -it.value());
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) triplets.emplace_back(i, i, degree(i));
  SparseMatrix l(n, n);
  l.setFromTriplets(triplets.begin(), triplets.end());
  return l;
}

namespace {

Eigen::VectorXd checked_row_sums(const WeightMatrix& weights) {
  Eigen::VectorXd sums = weights.values().rowwise().sum();
  for (Eigen::Index i = 0; i < sums.size(); ++i) {
    if (!(sums(i) > 0.0)) throw IsolatedNodeError("", static_cast<std::size_t>(i));
  }
  return sums;
}

}  // namespace

WalkMatrix random_walk(const WeightMatrix& weights) {
  const Eigen::VectorXd sums = checked_row_sums(weights);
  return {weights.values().array().colwise() / sums.array(), false};
}

WalkMatrix lazy_random_walk(const WeightMatrix& weights) {
  DenseMatrix off = weights.values();
  off.diagonal().setZero();
  Eigen::VectorXd sums = off.rowwise().sum();
  for (Eigen::Index i = 0; i < sums.size(); ++i) {
    if (!(sums(i) > 0.0)) throw IsolatedNodeError("", static_cast<std::size_t>(i));
  }
  // Divide rather than multiply by a reciprocal so a single edge maps to exactly 0.5.
  WalkMatrix p{off.array().colwise() / (2.0 * sums.array()), true};
  p.values.diagonal().setConstant(0.5);
  return p;
}

WeightMatrix symmetrize(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw ArgumentError("symmetrize: matrix must be square");
  DenseMatrix s = 0.5 * (m + m.transpose());
  return WeightMatrix(std::move(s), MatrixKind::symmetric);
}

SparseMatrix symmetrize(const SparseMatrix& m) {
  if (m.rows() != m.cols()) throw ArgumentError("symmetrize: matrix must be square");
  SparseMatrix s = 0.5 * (m + SparseMatrix(m.transpose()));
  s.prune(0.0);
  return s;
}

WeightMatrix mean_nonzero_normalize(const WeightMatrix& weights) {
  const auto& v = weights.values();
  double total = 0.0;
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (v(i, j) > 0.0) {
        total += v(i, j);
        ++count;
      }
    }
  }
  if (count == 0) throw ArgumentError("mean_nonzero_normalize: matrix has no nonzero entries");
  const double mean = total / static_cast<double>(count);
  return WeightMatrix(v / mean, weights.kind());
}

}  // namespace permmap
