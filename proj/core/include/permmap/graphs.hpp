#pragma once

#include "permmap/weight_matrix.hpp"

namespace permmap {

/// Combinatorial Laplacian L = D - A. Diagonal entries of A (self-loops) are
/// ignored, so every row of L sums to zero.
struct LaplacianMatrix {
  DenseMatrix values;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

struct WalkMatrix {
  DenseMatrix values;
  bool lazy = false;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

/// Throws ArgumentError for a directed matrix; symmetrize it first.
LaplacianMatrix laplacian(const WeightMatrix& weights);

/// Sparse counterpart for assembled multilayer systems. The input must be
/// symmetric (checked to 1e-12 relative).
SparseMatrix laplacian(const SparseMatrix& weights);

/// Row-normalized transition matrix. A row with no weight throws
/// IsolatedNodeError naming the node.
WalkMatrix random_walk(const WeightMatrix& weights);

/// Off-diagonal entries W(i,j) / (2 rowsum(i)); diagonal 0.5.
WalkMatrix lazy_random_walk(const WeightMatrix& weights);

/// (M + M^T) / 2.
WeightMatrix symmetrize(const DenseMatrix& m);
SparseMatrix symmetrize(const SparseMatrix& m);

/// Divides every entry by the mean of the strictly positive entries.
WeightMatrix mean_nonzero_normalize(const WeightMatrix& weights);

}  // namespace permmap
