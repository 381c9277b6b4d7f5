#include "permmap/layers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "permmap/csv.hpp"
#include "permmap/errors.hpp"
#include "permmap/format.hpp"
#include "permmap/graphs.hpp"

namespace permmap {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(Eigen::Index n, const Triplets& t) {
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(0.0);
  return m;
}

// Off-diagonal part of the lazy walk: each row sums to 0.5.
DenseMatrix half_walk(const WeightMatrix& w, LayerTag layer) {
  try {
    DenseMatrix p = lazy_random_walk(w).values;
    p.diagonal().setZero();
    return p;
  } catch (const IsolatedNodeError& e) {
    throw IsolatedNodeError(std::string(to_string(layer)), e.node());
  }
}

void require_positive_rows(const DenseMatrix& m, LayerTag layer) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!(m.row(i).sum() > 0.0)) throw IsolatedNodeError(std::string(to_string(layer)), static_cast<std::size_t>(i));
  }
}

}  // namespace

std::size_t MultiLayerSystem::row_of(std::size_t location, LayerTag layer, CopyTag copy) const {
  for (std::size_t r = 0; r < provenance.size(); ++r) {
    const PointTag& p = provenance[r];
    if (p.location == location && p.layer == layer && p.copy == copy) return r;
  }
  throw ConsistencyError("no row for location " + std::to_string(location) + " in layer " +
                         std::string(to_string(layer)) + "/" + std::string(to_string(copy)));
}

MultiLayerSystem build_two_layer(const WeightMatrix& red, const WeightMatrix& green) {
  if (red.size() != green.size()) throw ArgumentError("build_two_layer: layer sizes differ");
  if (red.size() < 2) throw ArgumentError("build_two_layer: need at least 2 locations per layer");
  if (!red.is_symmetric() || !green.is_symmetric()) throw ArgumentError("build_two_layer: layers must be symmetric");

  const auto n = static_cast<Eigen::Index>(red.size());
  const DenseMatrix r = half_walk(red, LayerTag::distance);
  const DenseMatrix g = half_walk(green, LayerTag::border);

  Triplets t;
  t.reserve(static_cast<std::size_t>(2 * n * n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (r(i, j) != 0.0) t.emplace_back(i, j, r(i, j));
      if (g(i, j) != 0.0) t.emplace_back(n + i, n + j, g(i, j));
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    t.emplace_back(i, n + i, 0.5);
    t.emplace_back(n + i, i, 0.5);
  }

  MultiLayerSystem sys;
  sys.n = red.size();
  sys.layer_tags = {LayerTag::distance, LayerTag::border};
  sys.copies_per_layer = 1;
  sys.pre_symmetrization = from_triplets(2 * n, t);
  sys.assembled = symmetrize(sys.pre_symmetrization);
  sys.provenance.reserve(2 * sys.n);
  for (std::size_t i = 0; i < sys.n; ++i) sys.provenance.push_back({i, LayerTag::distance, CopyTag::single});
  for (std::size_t i = 0; i < sys.n; ++i) sys.provenance.push_back({i, LayerTag::border, CopyTag::single});
  return sys;
}

WeightMatrix replicate_directed(const WeightMatrix& directed) {
  const auto n = static_cast<Eigen::Index>(directed.size());
  DenseMatrix out = DenseMatrix::Zero(2 * n, 2 * n);
  out.topRightCorner(n, n) = directed.values();
  out.bottomLeftCorner(n, n) = directed.values().transpose();
  return WeightMatrix(std::move(out), MatrixKind::symmetric);
}

WeightMatrix normalize_sequence_layer(const WeightMatrix& sequence) {
  if (sequence.size() == 0 || sequence.max_entry() == 0.0) {
    throw ArgumentError("normalize_sequence_layer: sequence layer has no edges");
  }
  DenseMatrix m = mean_nonzero_normalize(sequence).values();
  const Eigen::VectorXd rows = m.rowwise().sum();
  const double target = rows.maxCoeff();
  for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, i) += target - rows(i);
  return WeightMatrix(std::move(m), MatrixKind::directed);
}

MultiLayerSystem build_three_layer(const WeightMatrix& border, const WeightMatrix& distance,
                                   const WeightMatrix& sequence) {
  if (border.size() != distance.size() || border.size() != sequence.size()) {
    throw ArgumentError("build_three_layer: layer sizes differ");
  }
  if (border.size() < 2) throw ArgumentError("build_three_layer: need at least 2 locations per layer");
  if (!border.is_symmetric() || !distance.is_symmetric()) {
    throw ArgumentError("build_three_layer: border and distance layers must be symmetric");
  }

  const auto n = static_cast<Eigen::Index>(border.size());
  constexpr int kLayers = 3;
  const LayerTag tags[kLayers] = {LayerTag::border, LayerTag::distance, LayerTag::sequence};
  const DenseMatrix layers[kLayers] = {mean_nonzero_normalize(border).values(),
                                       mean_nonzero_normalize(distance).values(),
                                       normalize_sequence_layer(sequence).values()};
  for (int l = 0; l < kLayers; ++l) require_positive_rows(layers[l], tags[l]);

  // Coupled 3n directed matrix: half of each row's budget stays in the layer,
  // a quarter goes to each other layer's copy of the same node.
  Triplets coupled;
  for (int l = 0; l < kLayers; ++l) {
    const Eigen::VectorXd budget = layers[l].rowwise().sum();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (layers[l](i, j) != 0.0) coupled.emplace_back(l * n + i, l * n + j, 0.5 * layers[l](i, j));
      }
      for (int other = 0; other < kLayers; ++other) {
        if (other != l) coupled.emplace_back(l * n + i, other * n + i, 0.25 * budget(i));
      }
    }
  }

  MultiLayerSystem sys;
  sys.n = border.size();
  sys.layer_tags = {tags[0], tags[1], tags[2]};
  sys.copies_per_layer = 2;
  sys.coupled = from_triplets(kLayers * n, coupled);

  const DenseMatrix c(sys.coupled);
  auto out_row = [n](int l, Eigen::Index i) { return (2 * l) * n + i; };
  auto in_row = [n](int l, Eigen::Index i) { return (2 * l + 1) * n + i; };

  Triplets t;
  for (int l = 0; l < kLayers; ++l) {
    const bool directed = tags[l] == LayerTag::sequence;
    const auto block = c.block(l * n, l * n, n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double w = block(i, j);
        if (w == 0.0) continue;
        t.emplace_back(out_row(l, i), in_row(l, j), w);
        if (directed) t.emplace_back(in_row(l, j), out_row(l, i), w);
      }
      const double link = 0.5 * (block.row(i).sum() + block.col(i).sum());
      t.emplace_back(out_row(l, i), in_row(l, i), link);
      t.emplace_back(in_row(l, i), out_row(l, i), link);
      for (int other = 0; other < kLayers; ++other) {
        if (other == l) continue;
        const double w = c(l * n + i, other * n + i);
        t.emplace_back(out_row(l, i), in_row(other, i), w);
        t.emplace_back(in_row(other, i), out_row(l, i), w);
      }
    }
  }
  sys.pre_symmetrization = from_triplets(2 * kLayers * n, t);
  sys.assembled = symmetrize(sys.pre_symmetrization);

  sys.provenance.reserve(static_cast<std::size_t>(2 * kLayers * n));
  for (int l = 0; l < kLayers; ++l) {
    for (CopyTag copy : {CopyTag::out, CopyTag::in}) {
      for (std::size_t i = 0; i < sys.n; ++i) sys.provenance.push_back({i, tags[l], copy});
    }
  }
  return sys;
}

namespace {

struct LayerPositions {
  DenseMatrix sum;
  std::vector<std::size_t> count;
};

std::size_t location_span(const Embedding& e) {
  std::size_t n = 0;
  for (const auto& p : e.provenance) n = std::max(n, p.location + 1);
  return n;
}

}  // namespace

DisplacementReport displacement(const Embedding& embedding, LayerTag from, LayerTag to) {
  if (embedding.provenance.size() != embedding.n_points()) {
    throw ConsistencyError("displacement: provenance does not match embedding rows");
  }
  const std::size_t n = location_span(embedding);
  const auto k = static_cast<Eigen::Index>(embedding.dimensions());
  std::map<LayerTag, LayerPositions> acc;
  for (LayerTag tag : {from, to}) acc[tag] = {DenseMatrix::Zero(static_cast<Eigen::Index>(n), k), std::vector<std::size_t>(n, 0)};

  std::vector<bool> present(n, false);
  for (std::size_t p = 0; p < embedding.n_points(); ++p) {
    const PointTag& tag = embedding.provenance[p];
    present[tag.location] = true;
    auto it = acc.find(tag.layer);
    if (it == acc.end()) continue;
    it->second.sum.row(static_cast<Eigen::Index>(tag.location)) += embedding.coordinates.row(static_cast<Eigen::Index>(p));
    ++it->second.count[tag.location];
  }

  DisplacementReport report;
  for (std::size_t loc = 0; loc < n; ++loc) {
    if (!present[loc]) continue;
    const auto& a = acc.at(from);
    const auto& b = acc.at(to);
    if (a.count[loc] == 0 || b.count[loc] == 0) {
      throw ConsistencyError("displacement: location " + std::to_string(loc) + " lacks a " +
                             std::string(to_string(a.count[loc] == 0 ? from : to)) + " copy");
    }
    const auto row = static_cast<Eigen::Index>(loc);
    Eigen::VectorXd v = (b.sum.row(row) / static_cast<double>(b.count[loc]) -
                         a.sum.row(row) / static_cast<double>(a.count[loc])).transpose();
    const double length = v.norm();
    report.entries.push_back({loc, from, to, std::move(v), length});
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const Displacement& x, const Displacement& y) { return x.length > y.length; });
  return report;
}

void write_displacement_csv(std::ostream& out, const DisplacementReport& report,
                            std::span<const Location> locations) {
  static constexpr std::string_view kAxes[] = {"dx", "dy", "dz"};
  const Eigen::Index k = report.entries.empty() ? 0 : report.entries.front().vector.size();
  out << "location_id,from_layer,to_layer";
  for (Eigen::Index c = 0; c < k; ++c) out << ',' << (c < 3 ? std::string(kAxes[c]) : "d" + std::to_string(c));
  out << ",length,country\n";
  for (const auto& d : report.entries) {
    out << d.location << ',' << to_string(d.from) << ',' << to_string(d.to);
    for (Eigen::Index c = 0; c < d.vector.size(); ++c) out << ',' << format_double(d.vector(c));
    out << ',' << format_double(d.length) << ','
        << (d.location < locations.size() ? csv::escape(locations[d.location].country) : "") << '\n';
  }
}

double separation_ratio(const Embedding& embedding, std::span<const Location> locations) {
  const std::size_t n = location_span(embedding);
  if (n > locations.size()) throw ConsistencyError("separation_ratio: embedding refers to unknown locations");
  const auto k = static_cast<Eigen::Index>(embedding.dimensions());
  DenseMatrix pos = DenseMatrix::Zero(static_cast<Eigen::Index>(n), k);
  std::vector<std::size_t> count(n, 0);
  for (std::size_t p = 0; p < embedding.n_points(); ++p) {
    const std::size_t loc = embedding.provenance.at(p).location;
    pos.row(static_cast<Eigen::Index>(loc)) += embedding.coordinates.row(static_cast<Eigen::Index>(p));
    ++count[loc];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] > 0) pos.row(static_cast<Eigen::Index>(i)) /= static_cast<double>(count[i]);
  }

  double inter = 0.0, intra = 0.0;
  std::size_t n_inter = 0, n_intra = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] == 0) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (count[j] == 0) continue;
      const double d = (pos.row(static_cast<Eigen::Index>(i)) - pos.row(static_cast<Eigen::Index>(j))).norm();
      if (locations[i].country == locations[j].country) {
        intra += d;
        ++n_intra;
      } else {
        inter += d;
        ++n_inter;
      }
    }
  }
  if (n_inter == 0 || n_intra == 0) {
    throw ArgumentError("separation_ratio: need pairs both within and across countries");
  }
  return (inter / static_cast<double>(n_inter)) / (intra / static_cast<double>(n_intra));
}

Embedding embed_geo(std::span<const Location> locations, const CountryBorderGraph* borders, double cost_km, int k,
                    double multiplier, const SolverOptions& options) {
  WeightMatrix d = distance_matrix(locations);
  if (borders != nullptr) {
    d = linear_border_distances(d, crossings_matrix(locations, *borders), cost_km);
  } else if (cost_km != 0.0) {
    throw ArgumentError("embed_geo: a border cost needs a country border graph");
  }
  return embed(invert_distances(d, multiplier), k, options);
}

MultiLayerRun embed_two_layer(std::span<const Location> locations, const CountryBorderGraph& borders,
                              double probability, int k, double multiplier, const SolverOptions& options) {
  const WeightMatrix red = invert_distances(distance_matrix(locations), multiplier);
  const WeightMatrix green = border_permeability_matrix(crossings_matrix(locations, borders), probability);
  MultiLayerRun run;
  run.system = build_two_layer(red, green);
  run.embedding = embed(run.system.assembled, k, options);
  run.embedding.provenance = run.system.provenance;
  run.displacement = displacement(run.embedding, LayerTag::distance, LayerTag::border);
  return run;
}

MultiLayerRun embed_three_layer(std::span<const Location> locations, const CountryBorderGraph& borders,
                                double probability, const WeightMatrix& sequence, int k, double multiplier,
                                const SolverOptions& options) {
  const WeightMatrix dist = invert_distances(distance_matrix(locations), multiplier);
  const WeightMatrix border = border_permeability_matrix(crossings_matrix(locations, borders), probability);
  MultiLayerRun run;
  run.system = build_three_layer(border, dist, sequence);
  run.embedding = embed(run.system.assembled, k, options);
  run.embedding.provenance = run.system.provenance;
  const std::pair<LayerTag, LayerTag> pairs[] = {{LayerTag::distance, LayerTag::border},
                                                 {LayerTag::distance, LayerTag::sequence},
                                                 {LayerTag::border, LayerTag::sequence}};
  for (const auto& [from, to] : pairs) {
    auto part = displacement(run.embedding, from, to);
    run.displacement.entries.insert(run.displacement.entries.end(),
                                    std::make_move_iterator(part.entries.begin()),
                                    std::make_move_iterator(part.entries.end()));
  }
  return run;
}

}  // namespace permmap
