#pragma once

#include <cstddef>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace permmap {

using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

enum class MatrixKind { symmetric, directed };

/// Square nonnegative edge-weight matrix. A symmetric matrix is checked for
/// exact symmetry up to 1e-12 of its largest entry.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(DenseMatrix values, MatrixKind kind);

  static WeightMatrix zeros(std::size_t n, MatrixKind kind);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  MatrixKind kind() const noexcept { return kind_; }
  bool is_symmetric() const noexcept { return kind_ == MatrixKind::symmetric; }

  const DenseMatrix& values() const noexcept { return values_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double max_entry() const;

 private:
  DenseMatrix values_;
  MatrixKind kind_ = MatrixKind::symmetric;
};

/// Largest |M(i,j) - M(j,i)| relative to the largest |entry|; 0 for an empty or zero matrix.
double relative_asymmetry(const DenseMatrix& m);
double relative_asymmetry(const SparseMatrix& m);

}  // namespace permmap
