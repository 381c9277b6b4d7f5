#pragma once

#include <istream>
#include <ostream>

#include "permmap/weight_matrix.hpp"

namespace permmap {

/// Coordinate-list text: one `i j value` triple per line, 0-based, column
/// major order, zeros omitted.
void write_coordinate_list(std::ostream& out, const SparseMatrix& m);
void write_coordinate_list(std::ostream& out, const DenseMatrix& m);

/// Reads triples back into an n x n matrix; duplicate coordinates are summed.
SparseMatrix read_coordinate_list(std::istream& in, Eigen::Index n);

}  // namespace permmap
