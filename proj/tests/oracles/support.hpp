#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "permmap/ingest.hpp"
#include "permmap/spectral.hpp"
#include "permmap/weight_matrix.hpp"

namespace testing_support {

inline std::string data_path(const std::string& name) { return std::string(PERMMAP_TEST_DATA) + "/" + name; }
inline std::string repo_data_path(const std::string& name) { return std::string(PERMMAP_REPO_DATA) + "/" + name; }

inline std::ifstream open_data(const std::string& name) {
  std::ifstream in(data_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing test data " + name);
  return in;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(g() >> 11) * 0x1.0p-53);
}

/// Random symmetric nonnegative weights with zero diagonal; each pair is an
/// edge with probability `density`.
inline Eigen::MatrixXd random_symmetric_weights(std::mt19937_64& g, int n, double density) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (uniform(g, 0, 1) < density) w(i, j) = w(j, i) = uniform(g, 0.1, 5.0);
  return w;
}

inline permmap::Location make_location(std::size_t id, double lat, double lon, std::string country) {
  return {id, lat, lon, std::move(country), "admin" + std::to_string(id)};
}

/// Twelve locations in three countries on a chain Aland - Borduria - Carpania.
inline std::vector<permmap::Location> twelve_locations() {
  const double pts[12][2] = {{10.0, 0.0},  {10.6, 0.4}, {11.1, -0.3}, {9.5, 0.8},  {10.2, 2.1},  {10.9, 2.6},
                             {9.7, 2.9},   {11.4, 2.2}, {10.1, 4.4},  {10.8, 5.0}, {9.4, 4.7},   {11.3, 4.1}};
  const char* countries[3] = {"Aland", "Borduria", "Carpania"};
  std::vector<permmap::Location> out;
  for (std::size_t i = 0; i < 12; ++i) out.push_back(make_location(i, pts[i][0], pts[i][1], countries[i / 4]));
  return out;
}

/// Twenty locations, ten on each side of a West/East border, scattered with a
/// fixed pseudo-random layout.
inline std::vector<permmap::Location> two_country_locations() {
  auto g = rng(20240607);
  std::vector<permmap::Location> out;
  for (std::size_t i = 0; i < 20; ++i) {
    const bool west = i < 10;
    const double lat = uniform(g, 10.0, 13.0);
    const double lon = (west ? 0.0 : 3.5) + uniform(g, 0.0, 3.0);
    out.push_back(make_location(i, lat, lon, west ? "West" : "East"));
  }
  return out;
}

/// Fourteen locations mirror-symmetric about the equator, West and East of
/// longitude 2.6. Locations 0 and 1 face each other across the border; 2 and
/// 3 are their mirror images and serve as the control pair.
inline std::vector<permmap::Location> mirrored_border_locations() {
  const double pts[14][3] = {{1, 1, 0},    {1, 4, 1},   {-1, 1, 0},  {-1, 4, 1},  {3, 0.5, 0},
                             {-3, 0.5, 0}, {3, 4.5, 1}, {-3, 4.5, 1}, {0, 2, 0},  {0, 3.2, 1},
                             {5, 2, 0},    {-5, 2, 0},  {5, 3.5, 1}, {-5, 3.5, 1}};
  std::vector<permmap::Location> out;
  for (std::size_t i = 0; i < 14; ++i)
    out.push_back(make_location(i, pts[i][0], pts[i][1], pts[i][2] == 0 ? "West" : "East"));
  return out;
}

/// Mean embedded position of each location over all of its copies.
inline Eigen::VectorXd location_centroid(const permmap::Embedding& e, std::size_t location) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(e.dimensions()));
  int m = 0;
  for (std::size_t p = 0; p < e.n_points(); ++p)
    if (e.provenance[p].location == location) {
      c += e.coordinates.row(static_cast<Eigen::Index>(p)).transpose();
      ++m;
    }
  return c / m;
}

}  // namespace testing_support
