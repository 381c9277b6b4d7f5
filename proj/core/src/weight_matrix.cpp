#include "permmap/weight_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "permmap/errors.hpp"

namespace permmap {

double relative_asymmetry(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

double relative_asymmetry(const SparseMatrix& m) {
  if (m.nonZeros() == 0) return 0.0;
  double scale = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  }
  if (scale == 0.0) return 0.0;
  const SparseMatrix diff = m - SparseMatrix(m.transpose());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst / scale;
}

WeightMatrix::WeightMatrix(DenseMatrix values, MatrixKind kind)
    : values_(std::move(values)), kind_(kind) {
  if (values_.rows() != values_.cols()) throw ArgumentError("weight matrix must be square");
  if (!values_.allFinite()) throw ArgumentError("weight matrix has non-finite entries");
  if (values_.size() > 0 && values_.minCoeff() < 0.0) {
    throw ArgumentError("weight matrix has negative entries");
  }
  if (kind_ == MatrixKind::symmetric && relative_asymmetry(values_) > 1e-12) {
    throw ArgumentError("weight matrix flagged symmetric is not symmetric");
  }
}

WeightMatrix WeightMatrix::zeros(std::size_t n, MatrixKind kind) {
  const auto size = static_cast<Eigen::Index>(n);
  return WeightMatrix(DenseMatrix::Zero(size, size), kind);
}

double WeightMatrix::max_entry() const { return values_.size() == 0 ? 0.0 : values_.maxCoeff(); }

}  // namespace permmap
