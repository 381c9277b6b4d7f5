#include "permmap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include <Eigen/Eigenvalues>

#include "permmap/csv.hpp"
#include "permmap/errors.hpp"
#include "permmap/format.hpp"
#include "permmap/graphs.hpp"

namespace permmap {

namespace {

void check_request(Eigen::Index rows, Eigen::Index cols, std::size_t count) {
  if (rows != cols) throw ArgumentError("eigensolve: matrix must be square");
  if (count == 0 || static_cast<Eigen::Index>(count) > rows) {
    throw ArgumentError("eigensolve: requested " + std::to_string(count) + " pairs of a " +
                        std::to_string(rows) + "x" + std::to_string(rows) + " matrix");
  }
}

EigenPairs dense_smallest(const DenseMatrix& m, std::size_t count) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw SolverError("dense eigensolver failed", 0);
  const auto c = static_cast<Eigen::Index>(count);
  return {solver.eigenvalues().head(c), solver.eigenvectors().leftCols(c), 0};
}

Components label_components(Eigen::Index n, const std::vector<std::vector<Eigen::Index>>& adjacency) {
  constexpr auto kUnset = static_cast<std::size_t>(-1);
  Components out;
  out.labels.assign(static_cast<std::size_t>(n), kUnset);
  std::deque<Eigen::Index> queue;
  for (Eigen::Index start = 0; start < n; ++start) {
    if (out.labels[static_cast<std::size_t>(start)] != kUnset) continue;
    const std::size_t label = out.count++;
    out.labels[static_cast<std::size_t>(start)] = label;
    queue.push_back(start);
    while (!queue.empty()) {
      const Eigen::Index u = queue.front();
      queue.pop_front();
      for (Eigen::Index v : adjacency[static_cast<std::size_t>(u)]) {
        auto& l = out.labels[static_cast<std::size_t>(v)];
        if (l == kUnset) {
          l = label;
          queue.push_back(v);
        }
      }
    }
  }
  return out;
}

void fix_signs(DenseMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    auto col = vectors.col(c);
    const double biggest = col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) >= biggest * (1.0 - 1e-9)) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
}

template <class Matrix>
Embedding finish_embedding(const Matrix& lap, const EigenPairs& pairs, double scale, int k) {
  if (!(pairs.values(1) > 1e-8 * scale)) {
    throw DisconnectedGraphError("zero Laplacian eigenvalue is repeated", {});
  }
  Embedding e;
  e.eigenvalues = pairs.values.segment(1, k);
  e.coordinates = pairs.vectors.middleCols(1, k);
  fix_signs(e.coordinates);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Eigen::VectorXd v = e.coordinates.col(c);
    e.residuals.push_back((lap * v - e.eigenvalues(c) * v).norm());
  }
  e.provenance.resize(static_cast<std::size_t>(lap.rows()));
  for (std::size_t i = 0; i < e.provenance.size(); ++i) e.provenance[i] = {i, LayerTag::distance, CopyTag::single};
  return e;
}

void check_k(std::size_t n, int k) {
  if (k < 1 || static_cast<std::size_t>(k) + 1 > n) {
    throw ArgumentError("embed: k must lie in [1, n - 1] (k = " + std::to_string(k) +
                        ", n = " + std::to_string(n) + ")");
  }
}

}  // namespace

EigenPairs eigensolve_symmetric(const DenseMatrix& m, std::size_t count, const SolverOptions& options) {
  check_request(m.rows(), m.cols(), count);
  if (relative_asymmetry(m) > 1e-10) throw ArgumentError("eigensolve: matrix is not symmetric");
  if (static_cast<std::size_t>(m.rows()) <= options.dense_limit) return dense_smallest(m, count);
  return eigensolve_iterative(m.sparseView(), count, options);
}

EigenPairs eigensolve_symmetric(const SparseMatrix& m, std::size_t count, const SolverOptions& options) {
  check_request(m.rows(), m.cols(), count);
  if (relative_asymmetry(m) > 1e-10) throw ArgumentError("eigensolve: matrix is not symmetric");
  if (static_cast<std::size_t>(m.rows()) <= options.dense_limit) return dense_smallest(DenseMatrix(m), count);
  return eigensolve_iterative(m, count, options);
}

std::vector<std::size_t> Components::sizes() const {
  std::vector<std::size_t> s(count, 0);
  for (std::size_t l : labels) ++s[l];
  return s;
}

Components connected_components(const DenseMatrix& m) {
  const Eigen::Index n = m.rows();
  std::vector<std::vector<Eigen::Index>> adjacency(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (m(i, j) > 0.0 || m(j, i) > 0.0) {
        adjacency[static_cast<std::size_t>(i)].push_back(j);
        adjacency[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  }
  return label_components(n, adjacency);
}

Components connected_components(const SparseMatrix& m) {
  const Eigen::Index n = m.rows();
  std::vector<std::vector<Eigen::Index>> adjacency(static_cast<std::size_t>(n));
  for (Eigen::Index col = 0; col < m.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
      if (it.value() > 0.0 && it.row() != it.col()) {
        adjacency[static_cast<std::size_t>(it.row())].push_back(it.col());
        adjacency[static_cast<std::size_t>(it.col())].push_back(it.row());
      }
    }
  }
  return label_components(n, adjacency);
}

std::string_view to_string(LayerTag tag) noexcept {
  switch (tag) {
    case LayerTag::distance: return "distance";
    case LayerTag::border: return "border";
    case LayerTag::sequence: return "sequence";
  }
  return "?";
}

std::string_view to_string(CopyTag tag) noexcept {
  switch (tag) {
    case CopyTag::single: return "single";
    case CopyTag::out: return "out";
    case CopyTag::in: return "in";
  }
  return "?";
}

Embedding embed(const WeightMatrix& weights, int k, const SolverOptions& options) {
  if (!weights.is_symmetric()) throw ArgumentError("embed: weight matrix must be symmetric");
  const std::size_t n = weights.size();
  check_k(n, k);
  if (n > options.dense_limit) {
    return embed(SparseMatrix(weights.values().sparseView()), k, options);
  }
  const Components comps = connected_components(weights.values());
  if (comps.count > 1) throw DisconnectedGraphError(comps.sizes());

  const LaplacianMatrix lap = laplacian(weights);
  const EigenPairs pairs = eigensolve_symmetric(lap.values, static_cast<std::size_t>(k) + 1, options);
  const double scale = lap.values.cwiseAbs().rowwise().sum().maxCoeff();
  return finish_embedding(lap.values, pairs, scale, k);
}

Embedding embed(const SparseMatrix& weights, int k, const SolverOptions& options) {
  const auto n = static_cast<std::size_t>(weights.rows());
  check_k(n, k);
  const Components comps = connected_components(weights);
  if (comps.count > 1) throw DisconnectedGraphError(comps.sizes());

  const SparseMatrix lap = laplacian(weights);
  const EigenPairs pairs = eigensolve_symmetric(lap, static_cast<std::size_t>(k) + 1, options);
  Eigen::VectorXd row_abs = Eigen::VectorXd::Zero(lap.rows());
  for (Eigen::Index col = 0; col < lap.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(lap, col); it; ++it) row_abs(it.row()) += std::abs(it.value());
  }
  return finish_embedding(lap, pairs, row_abs.maxCoeff(), k);
}

void write_embedding_csv(std::ostream& out, const Embedding& embedding, std::span<const Location> locations) {
  static constexpr std::string_view kAxes[] = {"x", "y", "z"};
  out << "point_id,location_id,layer,copy";
  for (std::size_t c = 0; c < embedding.dimensions(); ++c) {
    out << ',' << (c < 3 ? std::string(kAxes[c]) : "d" + std::to_string(c));
  }
  out << ",country\n";
  for (std::size_t p = 0; p < embedding.n_points(); ++p) {
    const PointTag& tag = embedding.provenance.at(p);
    out << p << ',' << tag.location << ',' << to_string(tag.layer) << ',' << to_string(tag.copy);
    for (std::size_t c = 0; c < embedding.dimensions(); ++c) {
      out << ',' << format_double(embedding.coordinates(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)));
    }
    out << ',' << (tag.location < locations.size() ? csv::escape(locations[tag.location].country) : "") << '\n';
  }
}

void write_eigenvalues_csv(std::ostream& out, const Embedding& embedding) {
  out << "index,eigenvalue,residual\n";
  for (Eigen::Index i = 0; i < embedding.eigenvalues.size(); ++i) {
    out << i + 1 << ',' << format_double(embedding.eigenvalues(i)) << ','
        << format_double(embedding.residuals.at(static_cast<std::size_t>(i))) << '\n';
  }
}

}  // namespace permmap
