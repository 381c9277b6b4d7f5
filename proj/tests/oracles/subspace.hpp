#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace oracle {

/// Largest principal angle between span(a) and span(b), both with orthonormal columns.
inline double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.transpose() * b);
  return std::acos(std::min(1.0, svd.singularValues().minCoeff()));
}

}  // namespace oracle
