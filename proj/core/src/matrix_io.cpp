#include "permmap/matrix_io.hpp"

#include <sstream>
#include <string>
#include <vector>

#include "permmap/errors.hpp"
#include "permmap/format.hpp"

namespace permmap {

void write_coordinate_list(std::ostream& out, const SparseMatrix& m) {
  for (Eigen::Index col = 0; col < m.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
      if (it.value() == 0.0) continue;
      out << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
    }
  }
}

void write_coordinate_list(std::ostream& out, const DenseMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != 0.0) out << i << ' ' << j << ' ' << format_double(m(i, j)) << '\n';
    }
  }
}

SparseMatrix read_coordinate_list(std::istream& in, Eigen::Index n) {
  std::vector<Eigen::Triplet<double>> triplets;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long long i = -1, j = -1;
    double value = 0.0;
    if (!(fields >> i >> j >> value) || i < 0 || j < 0 || i >= n || j >= n) {
      throw ArgumentError("coordinate list line " + std::to_string(line_no) + " is malformed");
    }
    triplets.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), value);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace permmap
