// Block Lanczos with thick restarts for the smallest eigenpairs of a sparse
// symmetric matrix. The basis is kept fully orthonormal and every restart does
// an explicit Rayleigh-Ritz projection, so the method does not rely on the
// three-term recurrence and tolerates restart vectors that are not Krylov.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "permmap/errors.hpp"
#include "permmap/spectral.hpp"

namespace permmap {

namespace {

class RandomColumns {
 public:
  explicit RandomColumns(std::uint64_t seed) : engine_(seed) {}

  Eigen::VectorXd next(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v(i) = static_cast<double>(engine_() >> 11) * 0x1.0p-53 - 0.5;
    }
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

double inf_norm(const SparseMatrix& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (Eigen::Index col = 0; col < m.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) rows(it.row()) += std::abs(it.value());
  }
  return rows.size() == 0 ? 0.0 : rows.maxCoeff();
}

// Orthogonalizes x against the first `filled` columns of basis, twice.
// Returns the norm left over.
double orthogonalize(Eigen::VectorXd& x, const DenseMatrix& basis, Eigen::Index filled) {
  for (int pass = 0; pass < 2 && filled > 0; ++pass) {
    const auto q = basis.leftCols(filled);
    x -= q * (q.transpose() * x);
  }
  return x.norm();
}

}  // namespace

EigenPairs eigensolve_iterative(const SparseMatrix& m, std::size_t count, const SolverOptions& options) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw ArgumentError("eigensolve: matrix must be square");
  if (count == 0) return {Eigen::VectorXd(0), DenseMatrix(n, 0), 0};
  if (static_cast<Eigen::Index>(count) > n) throw ArgumentError("eigensolve: more pairs requested than rows");

  const auto wanted = static_cast<Eigen::Index>(count);
  const double scale = inf_norm(m);
  if (scale == 0.0) {
    return {Eigen::VectorXd::Zero(wanted), DenseMatrix::Identity(n, wanted), 0};
  }
  const double tol = options.tolerance * scale;

  const Eigen::Index block = std::min<Eigen::Index>(n, std::max<Eigen::Index>(2, wanted));
  const Eigen::Index capacity = std::min<Eigen::Index>(n, wanted + std::max<Eigen::Index>(3 * wanted, 40));
  const Eigen::Index keep = std::max<Eigen::Index>(wanted, std::min(capacity - block, wanted + block));
  const std::size_t budget = options.max_iterations * count;

  RandomColumns rng(options.seed);
  DenseMatrix basis(n, capacity);
  DenseMatrix image(n, capacity);  // m * basis
  Eigen::Index filled = 0;
  std::size_t matvecs = 0;

  std::vector<Eigen::VectorXd> pending;
  for (Eigen::Index b = 0; b < block; ++b) pending.push_back(rng.next(n));

  for (;;) {
    // Expand the basis block by block: orthonormalize the pending vectors,
    // then feed their images back in as the next block.
    while (filled < capacity && !pending.empty()) {
      std::vector<Eigen::VectorXd> next;
      for (auto& x : pending) {
        if (filled == capacity) break;
        const double before = x.norm();
        double after = orthogonalize(x, basis, filled);
        int retries = 0;
        while (!(after > 1e-10 * std::max(before, 1.0)) && retries < 3 && filled < n) {
          x = rng.next(n);
          after = orthogonalize(x, basis, filled);
          ++retries;
        }
        if (!(after > 0.0) || filled >= n) continue;
        basis.col(filled) = x / after;
        image.col(filled) = m * basis.col(filled);
        ++matvecs;
        next.push_back(image.col(filled));
        ++filled;
      }
      pending = std::move(next);
    }

    // Rayleigh-Ritz on the current subspace.
    const auto q = basis.leftCols(filled);
    const auto aq = image.leftCols(filled);
    DenseMatrix projected = q.transpose() * aq;
    projected = 0.5 * (projected + projected.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> small(projected);
    if (small.info() != Eigen::Success) throw SolverError("projected eigenproblem failed", matvecs);
    const DenseMatrix ritz = q * small.eigenvectors();
    const DenseMatrix ritz_image = aq * small.eigenvectors();
    const Eigen::VectorXd& theta = small.eigenvalues();

    const Eigen::Index available = std::min(filled, wanted);
    std::vector<Eigen::Index> unconverged;
    DenseMatrix residuals(n, filled);
    for (Eigen::Index i = 0; i < filled; ++i) {
      residuals.col(i) = ritz_image.col(i) - theta(i) * ritz.col(i);
    }
    for (Eigen::Index i = 0; i < available; ++i) {
      if (!(residuals.col(i).norm() <= tol)) unconverged.push_back(i);
    }
    if (available == wanted && (unconverged.empty() || filled == n)) {
      EigenPairs out;
      out.values = theta.head(wanted);
      out.vectors = ritz.leftCols(wanted);
      for (Eigen::Index c = 0; c < wanted; ++c) out.vectors.col(c).normalize();
      out.iterations = matvecs;
      return out;
    }
    if (matvecs >= budget) {
      throw SolverError("iterative eigensolver did not reach residual tolerance", matvecs);
    }

    // Thick restart: keep the lowest Ritz vectors, continue from residuals of
    // the pairs that have not converged yet.
    const Eigen::Index kept = std::min(keep, filled);
    basis.leftCols(kept) = ritz.leftCols(kept);
    image.leftCols(kept) = ritz_image.leftCols(kept);
    filled = kept;
    pending.clear();
    for (Eigen::Index i : unconverged) {
      if (static_cast<Eigen::Index>(pending.size()) == block) break;
      pending.push_back(residuals.col(i));
    }
    for (Eigen::Index i = 0; static_cast<Eigen::Index>(pending.size()) < block && i < filled; ++i) {
      if (std::find(unconverged.begin(), unconverged.end(), i) == unconverged.end()) {
        pending.push_back(residuals.col(i));
      }
    }
  }
}

}  // namespace permmap
