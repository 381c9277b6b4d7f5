#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "permmap/geo.hpp"
#include "permmap/spectral.hpp"
#include "permmap/weight_matrix.hpp"

namespace permmap {

/// Several relationship layers over the same n locations, coupled into one
/// symmetric graph. Row r of `assembled` is the point `provenance[r]`.
struct MultiLayerSystem {
  std::size_t n = 0;
  std::vector<LayerTag> layer_tags;
  std::size_t copies_per_layer = 1;

  /// Three-layer only: the 3n x 3n directed matrix in which each node keeps
  /// half its layer budget inside the layer and sends a quarter to each of
  /// its copies in the other two layers.
  SparseMatrix coupled;
  SparseMatrix pre_symmetrization;
  SparseMatrix assembled;
  std::vector<PointTag> provenance;

  std::size_t rows() const noexcept { return provenance.size(); }
  std::size_t row_of(std::size_t location, LayerTag layer, CopyTag copy) const;
};

/// Two-layer random-walk fusion. Each layer's rows are scaled to sum to 0.5
/// with a zero diagonal; the remaining 0.5 of every row goes to the edge
/// joining the node's two copies. Rows [0, n) hold `red` (distance), rows
/// [n, 2n) hold `green` (border).
MultiLayerSystem build_two_layer(const WeightMatrix& red, const WeightMatrix& green);

/// Splits each node into an out copy (rows [0, n)) and an in copy (rows
/// [n, 2n)); edge i -> j of weight w becomes the undirected edge out(i)-in(j).
WeightMatrix replicate_directed(const WeightMatrix& directed);

/// Mean-nonzero normalization followed by self-loop padding, so every row
/// sums to the largest row sum.
WeightMatrix normalize_sequence_layer(const WeightMatrix& sequence);

/// Border, distance, and sequence layers in a 6n x 6n system. Layer order is
/// border, distance, sequence; each layer has an out block then an in block.
///
/// Undirected layers place each within-layer entry once, out(i) -> in(j), and
/// rely on the final symmetrization to mirror it. The sequence layer and the
/// cross-layer edges are replicated in full. Out and in copies of a node in
/// a layer are joined with half the node's within-layer weight (outgoing plus
/// incoming) in the coupled matrix.
MultiLayerSystem build_three_layer(const WeightMatrix& border, const WeightMatrix& distance,
                                   const WeightMatrix& sequence);

struct Displacement {
  std::size_t location = 0;
  LayerTag from = LayerTag::distance;
  LayerTag to = LayerTag::border;
  Eigen::VectorXd vector;
  double length = 0.0;
};

struct DisplacementReport {
  std::vector<Displacement> entries;  // longest first
};

/// Per location, the vector from its `from`-layer position to its `to`-layer
/// position, where a layer position is the mean of that layer's copies.
/// Throws ConsistencyError if a location lacks either layer.
DisplacementReport displacement(const Embedding& embedding, LayerTag from, LayerTag to);

/// `location_id,from_layer,to_layer,dx,dy[,dz],length,country`
void write_displacement_csv(std::ostream& out, const DisplacementReport& report,
                            std::span<const Location> locations);

/// Mean embedded distance between locations in different countries divided
/// by the mean distance between distinct locations in the same country. A
/// location sits at the mean of its embedded copies.
double separation_ratio(const Embedding& embedding, std::span<const Location> locations);

struct MultiLayerRun {
  MultiLayerSystem system;
  Embedding embedding;
  DisplacementReport displacement;
};

/// Geodesic embedding with the additive border model; cost 0 skips the
/// border graph entirely and `borders` may then be null.
Embedding embed_geo(std::span<const Location> locations, const CountryBorderGraph* borders, double cost_km,
                    int k, double multiplier = kDefaultInversionMultiplier, const SolverOptions& options = {});

MultiLayerRun embed_two_layer(std::span<const Location> locations, const CountryBorderGraph& borders,
                              double probability, int k, double multiplier = kDefaultInversionMultiplier,
                              const SolverOptions& options = {});

MultiLayerRun embed_three_layer(std::span<const Location> locations, const CountryBorderGraph& borders,
                                double probability, const WeightMatrix& sequence, int k,
                                double multiplier = kDefaultInversionMultiplier,
                                const SolverOptions& options = {});

}  // namespace permmap
