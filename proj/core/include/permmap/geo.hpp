#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "permmap/ingest.hpp"
#include "permmap/weight_matrix.hpp"

namespace permmap {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kDefaultInversionMultiplier = 1.1;
inline constexpr double kDefaultBorderCostKm = 100.0;
inline constexpr double kDefaultBorderProbability = 0.95;

struct GeoPoint {
  double latitude = 0.0;   // degrees
  double longitude = 0.0;  // degrees
};

/// Great-circle distance in kilometres on a sphere of radius kEarthRadiusKm.
double haversine(GeoPoint a, GeoPoint b);

/// Pairwise haversine distances; needs at least two locations.
WeightMatrix distance_matrix(std::span<const Location> locations);

/// Turns distances into closeness weights: multiplier * max(D) - D off the
/// diagonal, zero on it.
WeightMatrix invert_distances(const WeightMatrix& distances,
                              double multiplier = kDefaultInversionMultiplier);

/// Shared land borders between countries.
class CountryBorderGraph {
 public:
  CountryBorderGraph() = default;

  /// Countries are added on first mention; self pairs are ignored.
  void add_border(const std::string& a, const std::string& b);
  void add_country(const std::string& name);

  /// Reads `countryA,countryB` pairs, one per line. Blank lines and lines
  /// starting with '#' are skipped; a first line of `country_a,country_b`
  /// (any case) is treated as a header.
  static CountryBorderGraph read_csv(std::istream& in);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& countries() const noexcept { return names_; }
  bool contains(const std::string& name) const;
  std::size_t index_of(const std::string& name) const;
  bool adjacent(std::size_t a, std::size_t b) const;
  const std::vector<std::size_t>& neighbours(std::size_t a) const { return adjacency_.at(a); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Fewest border crossings on any country path (breadth-first search).
/// Throws ArgumentError for unknown countries and DisconnectedGraphError when
/// no path exists.
std::size_t min_border_crossings(const CountryBorderGraph& graph, const std::string& from,
                                 const std::string& to);

using CrossingsMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

CrossingsMatrix crossings_matrix(std::span<const Location> locations,
                                 const CountryBorderGraph& graph);

/// D + cost_km * B, the additive border model.
WeightMatrix linear_border_distances(const WeightMatrix& distances, const CrossingsMatrix& crossings,
                                     double cost_km);

/// p^B entrywise with a zero diagonal. p must lie in (0, 1].
WeightMatrix border_permeability_matrix(const CrossingsMatrix& crossings, double probability);

}  // namespace permmap
