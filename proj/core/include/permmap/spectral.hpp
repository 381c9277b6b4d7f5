#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "permmap/ingest.hpp"
#include "permmap/weight_matrix.hpp"

namespace permmap {

struct SolverOptions {
  /// Matrices up to this order use a dense full decomposition; larger ones
  /// use block Lanczos with thick restarts.
  std::size_t dense_limit = 2000;
  /// Residual bound ||Mv - lambda v|| <= tolerance * ||M||_inf.
  double tolerance = 1e-8;
  /// Iteration cap per requested pair for the iterative path.
  std::size_t max_iterations = 10000;
  std::uint64_t seed = 0x5eed5eedULL;
};

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  DenseMatrix vectors;      // unit-norm columns
  std::size_t iterations = 0;
};

/// The `count` smallest eigenpairs of a symmetric matrix. Throws ArgumentError
/// when the asymmetry exceeds 1e-10 relative, SolverError when the iterative
/// path runs out of iterations.
EigenPairs eigensolve_symmetric(const DenseMatrix& m, std::size_t count,
                                const SolverOptions& options = {});
EigenPairs eigensolve_symmetric(const SparseMatrix& m, std::size_t count,
                                const SolverOptions& options = {});

/// Iterative path only, regardless of size.
EigenPairs eigensolve_iterative(const SparseMatrix& m, std::size_t count,
                                const SolverOptions& options = {});

struct Components {
  std::size_t count = 0;
  std::vector<std::size_t> labels;  // component of each node, numbered by lowest member

  std::vector<std::size_t> sizes() const;
};

/// Components of the graph whose edges are the positive entries of m or m^T.
Components connected_components(const DenseMatrix& m);
Components connected_components(const SparseMatrix& m);

enum class LayerTag { distance, border, sequence };
enum class CopyTag { single, out, in };

std::string_view to_string(LayerTag tag) noexcept;
std::string_view to_string(CopyTag tag) noexcept;

struct PointTag {
  std::size_t location = 0;
  LayerTag layer = LayerTag::distance;
  CopyTag copy = CopyTag::single;

  friend bool operator==(const PointTag&, const PointTag&) = default;
};

struct Embedding {
  DenseMatrix coordinates;       // one row per point, one column per dimension
  Eigen::VectorXd eigenvalues;   // smallest nonzero Laplacian eigenvalues, ascending
  std::vector<PointTag> provenance;
  std::vector<double> residuals;  // ||Lv - lambda v|| for each returned pair

  std::size_t n_points() const noexcept { return static_cast<std::size_t>(coordinates.rows()); }
  std::size_t dimensions() const noexcept { return static_cast<std::size_t>(coordinates.cols()); }
};

/// Spectral embedding: eigenvectors of the k smallest nonzero eigenvalues of
/// the combinatorial Laplacian, one per column. Each column is flipped so its
/// largest-magnitude entry is positive (lowest index wins ties). Provenance
/// defaults to one `distance/single` point per node.
///
/// Throws DisconnectedGraphError when the graph is disconnected or the zero
/// eigenvalue is repeated.
Embedding embed(const WeightMatrix& weights, int k, const SolverOptions& options = {});
Embedding embed(const SparseMatrix& weights, int k, const SolverOptions& options = {});

/// `point_id,location_id,layer,copy,x,y[,z],country`
void write_embedding_csv(std::ostream& out, const Embedding& embedding,
                         std::span<const Location> locations);
/// `index,eigenvalue,residual`
void write_eigenvalues_csv(std::ostream& out, const Embedding& embedding);

}  // namespace permmap
