#include "permmap/geo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "permmap/csv.hpp"
#include "permmap/errors.hpp"

namespace permmap {

namespace {

void check_point(GeoPoint p) {
  if (!(p.latitude >= -90.0 && p.latitude <= 90.0) || !(p.longitude >= -180.0 && p.longitude <= 180.0)) {
    throw ArgumentError("coordinate out of range: (" + std::to_string(p.latitude) + ", " +
                        std::to_string(p.longitude) + ")");
  }
}

constexpr double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace

double haversine(GeoPoint a, GeoPoint b) {
  check_point(a);
  check_point(b);
  const double phi1 = radians(a.latitude);
  const double phi2 = radians(b.latitude);
  const double dphi = radians(b.latitude - a.latitude);
  const double dlambda = radians(b.longitude - a.longitude);
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = std::min(1.0, s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

WeightMatrix distance_matrix(std::span<const Location> locations) {
  const auto n = static_cast<Eigen::Index>(locations.size());
  if (n < 2) throw ArgumentError("distance_matrix: need at least 2 locations");
  DenseMatrix d = DenseMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const GeoPoint a{locations[i].latitude, locations[i].longitude};
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double km = haversine(a, {locations[j].latitude, locations[j].longitude});
      d(i, j) = km;
      d(j, i) = km;
    }
  }
  return WeightMatrix(std::move(d), MatrixKind::symmetric);
}

WeightMatrix invert_distances(const WeightMatrix& distances, double multiplier) {
  if (!(multiplier > 1.0)) throw ArgumentError("invert_distances: multiplier must exceed 1");
  if (!distances.is_symmetric()) throw ArgumentError("invert_distances: distances must be symmetric");
  const double top = multiplier * distances.max_entry();
  DenseMatrix w = (top - distances.values().array()).matrix();
  w.diagonal().setZero();
  return WeightMatrix(std::move(w), MatrixKind::symmetric);
}

void CountryBorderGraph::add_country(const std::string& name) {
  if (name.empty()) throw ArgumentError("country name is empty");
  if (index_.try_emplace(name, names_.size()).second) {
    names_.push_back(name);
    adjacency_.emplace_back();
  }
}

void CountryBorderGraph::add_border(const std::string& a, const std::string& b) {
  add_country(a);
  add_country(b);
  const std::size_t ia = index_.at(a);
  const std::size_t ib = index_.at(b);
  if (ia == ib || adjacent(ia, ib)) return;
  adjacency_[ia].push_back(ib);
  adjacency_[ib].push_back(ia);
}

CountryBorderGraph CountryBorderGraph::read_csv(std::istream& in) {
  CountryBorderGraph graph;
  csv::Reader reader(in);
  bool first = true;
  while (auto rec = reader.next()) {
    if (rec->fields.empty() || csv::trim(rec->fields[0]).starts_with("#")) continue;
    const bool was_first = first;
    first = false;
    if (rec->fields.size() == 1) {
      graph.add_country(std::string(csv::trim(rec->fields[0])));
      continue;
    }
    if (rec->fields.size() != 2) {
      throw ConfigError("adjacency line " + std::to_string(rec->line) + ": expected countryA,countryB");
    }
    const std::string a(csv::trim(rec->fields[0]));
    const std::string b(csv::trim(rec->fields[1]));
    if (was_first && csv::lower(a) == "country_a" && csv::lower(b) == "country_b") continue;
    if (a.empty() || b.empty()) {
      throw ConfigError("adjacency line " + std::to_string(rec->line) + ": empty country name");
    }
    graph.add_border(a, b);
  }
  return graph;
}

bool CountryBorderGraph::contains(const std::string& name) const { return index_.contains(name); }

std::size_t CountryBorderGraph::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ArgumentError("unknown country '" + name + "'");
  return it->second;
}

bool CountryBorderGraph::adjacent(std::size_t a, std::size_t b) const {
  const auto& row = adjacency_.at(a);
  return std::find(row.begin(), row.end(), b) != row.end();
}

namespace {

std::vector<std::size_t> bfs_levels(const CountryBorderGraph& graph, std::size_t source) {
  constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);
  std::vector<std::size_t> level(graph.size(), kUnreached);
  std::deque<std::size_t> queue{source};
  level[source] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : graph.neighbours(u)) {
      if (level[v] == kUnreached) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return level;
}

}  // namespace

std::size_t min_border_crossings(const CountryBorderGraph& graph, const std::string& from,
                                 const std::string& to) {
  const std::size_t a = graph.index_of(from);
  const std::size_t b = graph.index_of(to);
  const std::size_t hops = bfs_levels(graph, a)[b];
  if (hops == static_cast<std::size_t>(-1)) {
    throw DisconnectedGraphError("no border path between '" + from + "' and '" + to + "'", {});
  }
  return hops;
}

CrossingsMatrix crossings_matrix(std::span<const Location> locations, const CountryBorderGraph& graph) {
  const auto n = static_cast<Eigen::Index>(locations.size());
  std::vector<std::size_t> country(locations.size());
  for (std::size_t i = 0; i < locations.size(); ++i) country[i] = graph.index_of(locations[i].country);

  // One search per distinct country is enough.
  std::map<std::size_t, std::vector<std::size_t>> levels;
  for (std::size_t c : country) {
    if (!levels.contains(c)) levels.emplace(c, bfs_levels(graph, c));
  }

  CrossingsMatrix b = CrossingsMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& from = levels.at(country[i]);
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::size_t hops = from[country[j]];
      if (hops == static_cast<std::size_t>(-1)) {
        throw DisconnectedGraphError("no border path between '" + locations[i].country + "' and '" +
                                         locations[j].country + "'",
                                     {});
      }
      b(i, j) = static_cast<int>(hops);
    }
  }
  return b;
}

WeightMatrix linear_border_distances(const WeightMatrix& distances, const CrossingsMatrix& crossings,
                                     double cost_km) {
  if (!(cost_km >= 0.0)) throw ArgumentError("linear_border_distances: cost must be nonnegative");
  if (crossings.rows() != distances.values().rows() || crossings.cols() != distances.values().cols()) {
    throw ArgumentError("linear_border_distances: matrix sizes differ");
  }
  if (cost_km == 0.0) return distances;
  DenseMatrix d = distances.values() + cost_km * crossings.cast<double>();
  return WeightMatrix(std::move(d), distances.kind());
}

WeightMatrix border_permeability_matrix(const CrossingsMatrix& crossings, double probability) {
  if (!(probability > 0.0 && probability <= 1.0)) {
    throw ArgumentError("border_permeability_matrix: probability must lie in (0, 1]");
  }
  const Eigen::Index n = crossings.rows();
  DenseMatrix w(n, crossings.cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) w(i, j) = std::pow(probability, crossings(i, j));
  }
  w.diagonal().setZero();
  return WeightMatrix(std::move(w), (crossings == crossings.transpose()) ? MatrixKind::symmetric
                                                                          : MatrixKind::directed);
}

}  // namespace permmap
