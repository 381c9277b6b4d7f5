#include <gtest/gtest.h>

#include <sstream>

#include "multilayer_oracle.hpp"
#include "permmap/errors.hpp"
#include "permmap/geo.hpp"
#include "permmap/graphs.hpp"
#include "permmap/layers.hpp"
#include "support.hpp"

using namespace permmap;
using testing_support::location_centroid;

namespace {

WeightMatrix sym(const DenseMatrix& m) { return WeightMatrix(m, MatrixKind::symmetric); }

oracle::Grid grid(const DenseMatrix& m) {
  oracle::Grid g(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
  return g;
}

double max_diff(const SparseMatrix& a, const oracle::Grid& b) {
  const DenseMatrix d(a);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j) worst = std::max(worst, std::abs(d(i, j) - b[i][j]));
  return worst;
}

CountryBorderGraph west_east() {
  CountryBorderGraph g;
  g.add_border("West", "East");
  return g;
}

struct ThreeLayerFixture {
  WeightMatrix border, distance, sequence;
};

// n = 3: three locations on a chain of countries, sequence 0 -> 1 twice, 1 -> 2 once.
ThreeLayerFixture fixture3() {
  DenseMatrix d(3, 3);
  d << 0, 120, 450, 120, 0, 360, 450, 360, 0;
  CrossingsMatrix b(3, 3);
  b << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  DenseMatrix s = DenseMatrix::Zero(3, 3);
  s(0, 1) = 2;
  s(1, 2) = 1;
  return {border_permeability_matrix(b, 0.95), invert_distances(sym(d)), WeightMatrix(s, MatrixKind::directed)};
}

}  // namespace

TEST(TwoLayer, HandAssembledPair) {
  DenseMatrix red(2, 2), green(2, 2);
  red << 0, 7, 7, 0;
  green << 0, 0.95, 0.95, 0;
  const auto sys = build_two_layer(sym(red), sym(green));
  DenseMatrix expected(4, 4);
  expected << 0, 0.5, 0.5, 0,  //
      0.5, 0, 0, 0.5,          //
      0.5, 0, 0, 0.5,          //
      0, 0.5, 0.5, 0;
  EXPECT_TRUE(DenseMatrix(sys.pre_symmetrization) == expected) << DenseMatrix(sys.pre_symmetrization);
  EXPECT_TRUE(DenseMatrix(sys.assembled) == expected);
  EXPECT_EQ(sys.row_of(1, LayerTag::border, CopyTag::single), 3u);
  EXPECT_EQ(sys.provenance[2], (PointTag{0, LayerTag::border, CopyTag::single}));
}

TEST(TwoLayer, MatchesOracleRowStochasticWithBlueDiagonal) {
  const auto locs = testing_support::twelve_locations();
  auto in = testing_support::open_data("synthetic_adjacency.csv");
  const auto cg = CountryBorderGraph::read_csv(in);
  const auto red = invert_distances(distance_matrix(locs));
  const auto green = border_permeability_matrix(crossings_matrix(locs, cg), 0.8);
  const auto sys = build_two_layer(red, green);
  const DenseMatrix pre(sys.pre_symmetrization);
  EXPECT_LE(max_diff(sys.pre_symmetrization, oracle::two_layer(grid(red.values()), grid(green.values()))), 1e-15);
  const Eigen::Index n = 12;
  for (Eigen::Index i = 0; i < 2 * n; ++i) EXPECT_NEAR(pre.row(i).sum(), 1.0, 1e-12);
  const DenseMatrix blue_rg = pre.block(0, n, n, n), blue_gr = pre.block(n, 0, n, n);
  EXPECT_TRUE(blue_rg == DenseMatrix::Identity(n, n) * 0.5);
  EXPECT_TRUE(blue_gr == DenseMatrix::Identity(n, n) * 0.5);
  EXPECT_EQ(relative_asymmetry(sys.assembled), 0.0);
}

TEST(TwoLayer, IsolatedNodeNamesLayer) {
  DenseMatrix red(3, 3), green = DenseMatrix::Zero(3, 3);
  red << 0, 1, 1, 1, 0, 1, 1, 1, 0;
  green(0, 1) = green(1, 0) = 1;
  try {
    build_two_layer(sym(red), sym(green));
    FAIL() << "expected IsolatedNodeError";
  } catch (const IsolatedNodeError& e) {
    EXPECT_EQ(e.layer(), "border");
    EXPECT_EQ(e.node(), 2u);
  }
}

TEST(ReplicateDirected, BlockLayoutAndWeightPreserved) {
  DenseMatrix a = DenseMatrix::Zero(3, 3);
  a(0, 1) = 2;
  a(2, 0) = 1.5;
  const auto r = replicate_directed(WeightMatrix(a, MatrixKind::directed));
  ASSERT_EQ(r.size(), 6u);
  EXPECT_TRUE(r.is_symmetric());
  EXPECT_EQ(r(0, 4), 2.0);
  EXPECT_EQ(r(4, 0), 2.0);
  EXPECT_EQ(r(2, 3), 1.5);
  const DenseMatrix upper = r.values().triangularView<Eigen::StrictlyUpper>();
  EXPECT_DOUBLE_EQ(upper.sum(), a.sum());
}

TEST(ReplicateDirectedProperties, TotalWeightPreserved) {
  auto g = testing_support::rng(73);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + static_cast<int>(g() % 10);
    DenseMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = (i != j && g() % 3 == 0) ? static_cast<double>(1 + g() % 5) : 0.0;
    const auto r = replicate_directed(WeightMatrix(a, MatrixKind::directed));
    EXPECT_DOUBLE_EQ(DenseMatrix(r.values().triangularView<Eigen::StrictlyUpper>()).sum(), a.sum());
  }
}

TEST(NormalizeSequenceLayer, RowsPaddedToConstant) {
  const auto f = fixture3();
  const auto s = normalize_sequence_layer(f.sequence);
  // Nonzero mean is 1.5, so the row sums are 4/3, 2/3, 0; S = 4/3.
  const double target = 4.0 / 3.0;
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(s.values().row(i).sum(), target, 1e-12);
  EXPECT_NEAR(s(0, 1), target, 1e-15);
  EXPECT_EQ(s(0, 0), 0.0);
  EXPECT_NEAR(s(1, 1), target - 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(s(2, 2), target, 1e-15);
  EXPECT_THROW(normalize_sequence_layer(WeightMatrix::zeros(3, MatrixKind::directed)), ArgumentError);
}

TEST(ThreeLayer, EighteenByEighteenMatchesOracle) {
  const auto f = fixture3();
  const auto sys = build_three_layer(f.border, f.distance, f.sequence);
  const auto want = oracle::three_layer(grid(f.border.values()), grid(f.distance.values()), grid(f.sequence.values()));
  ASSERT_EQ(sys.assembled.rows(), 18);
  EXPECT_LE(max_diff(sys.coupled, want.coupled), 1e-12);
  EXPECT_LE(max_diff(sys.pre_symmetrization, want.pre), 1e-12);
  EXPECT_LE(max_diff(sys.assembled, want.assembled), 1e-12);
  EXPECT_EQ(relative_asymmetry(sys.assembled), 0.0);

  // Sequence layer rows in the coupled matrix all carry the padded budget S.
  const DenseMatrix coupled(sys.coupled);
  const double s = oracle::row_sum(want.sequence_padded, 0);
  for (Eigen::Index i = 6; i < 9; ++i) EXPECT_NEAR(coupled.row(i).sum(), s, 1e-12);

  EXPECT_EQ(sys.row_of(0, LayerTag::border, CopyTag::out), 0u);
  EXPECT_EQ(sys.row_of(2, LayerTag::distance, CopyTag::in), 11u);
  EXPECT_EQ(sys.row_of(1, LayerTag::sequence, CopyTag::out), 13u);
  EXPECT_THROW(sys.row_of(0, LayerTag::sequence, CopyTag::single), ConsistencyError);
}

// Every node keeps half its layer budget inside the layer and sends a quarter
// to each of its other two copies.
TEST(ThreeLayerProperties, PerNodeBudgetSplit) {
  auto g = testing_support::rng(79);
  for (int t = 0; t < 20; ++t) {
    const int n = 3 + static_cast<int>(g() % 8);
    const DenseMatrix w = testing_support::random_symmetric_weights(g, n, 1.0);
    DenseMatrix bw = testing_support::random_symmetric_weights(g, n, 1.0);
    DenseMatrix s = DenseMatrix::Zero(n, n);
    for (int e = 0; e < 2 * n; ++e) {
      const int i = static_cast<int>(g() % n), j = static_cast<int>(g() % n);
      if (i != j) s(i, j) += 1;
    }
    if (s.sum() == 0.0) s(0, 1) = 1;
    const auto sys = build_three_layer(sym(bw), sym(w), WeightMatrix(s, MatrixKind::directed));
    const DenseMatrix c(sys.coupled);
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < n; ++i) {
        const Eigen::Index r = l * n + i;
        const double budget = c.row(r).sum();
        EXPECT_NEAR(c.block(r, l * n, 1, n).sum(), 0.5 * budget, 1e-12 * budget);
        for (int o = 0; o < 3; ++o)
          if (o != l) EXPECT_NEAR(c(r, o * n + i), 0.25 * budget, 1e-12 * budget);
      }
    EXPECT_LE(relative_asymmetry(sys.assembled), 1e-15);
  }
}

TEST(Displacement, CentroidsAndOrdering) {
  Embedding e;
  e.coordinates.resize(4, 2);
  e.coordinates << 0, 0,  //
      1, 0,               //
      0, 3,               //
      1, 1;
  e.eigenvalues = Eigen::VectorXd::Ones(2);
  e.provenance = {{0, LayerTag::distance, CopyTag::single},
                  {1, LayerTag::distance, CopyTag::single},
                  {0, LayerTag::border, CopyTag::single},
                  {1, LayerTag::border, CopyTag::single}};
  const auto r = displacement(e, LayerTag::distance, LayerTag::border);
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.entries[0].location, 0u);
  EXPECT_DOUBLE_EQ(r.entries[0].length, 3.0);
  EXPECT_DOUBLE_EQ(r.entries[1].vector(1), 1.0);
  EXPECT_THROW(displacement(e, LayerTag::distance, LayerTag::sequence), ConsistencyError);

  std::vector<Location> locs{testing_support::make_location(0, 0, 0, "A"),
                             testing_support::make_location(1, 0, 0, "B")};
  std::ostringstream out;
  write_displacement_csv(out, r, locs);
  EXPECT_EQ(out.str(),
            "location_id,from_layer,to_layer,dx,dy,length,country\n"
            "0,distance,border,0,3,3,A\n"
            "1,distance,border,0,1,1,B\n");
}

TEST(SeparationRatio, HandComputed) {
  Embedding e;
  e.coordinates.resize(4, 1);
  e.coordinates << 0, 1, 10, 12;
  e.eigenvalues = Eigen::VectorXd::Ones(1);
  for (std::size_t i = 0; i < 4; ++i) e.provenance.push_back({i, LayerTag::distance, CopyTag::single});
  std::vector<Location> locs;
  for (std::size_t i = 0; i < 4; ++i) locs.push_back(testing_support::make_location(i, 0, 0, i < 2 ? "A" : "B"));
  // intra: 1, 2 -> 1.5; inter: 10, 12, 9, 11 -> 10.5
  EXPECT_DOUBLE_EQ(separation_ratio(e, locs), 7.0);
}

TEST(EmbedGeo, ZeroCostMatchesPureGeodesicBytes) {
  const auto locs = testing_support::twelve_locations();
  auto in = testing_support::open_data("synthetic_adjacency.csv");
  const auto cg = CountryBorderGraph::read_csv(in);
  const auto pure = embed(invert_distances(distance_matrix(locs)), 2);
  const auto zero = embed_geo(locs, &cg, 0.0, 2);
  const auto no_graph = embed_geo(locs, nullptr, 0.0, 2);
  std::ostringstream a, b, c;
  write_embedding_csv(a, pure, locs);
  write_embedding_csv(b, zero, locs);
  write_embedding_csv(c, no_graph, locs);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
  EXPECT_THROW(embed_geo(locs, nullptr, 100.0, 2), ArgumentError);
}

TEST(SeparationProperties, MonotoneInCostAndProbability) {
  const auto locs = testing_support::two_country_locations();
  const auto cg = west_east();
  double last = 0.0;
  for (double cost : {0.0, 50.0, 100.0, 500.0}) {
    const double r = separation_ratio(embed_geo(locs, &cg, cost, 2), locs);
    EXPECT_GE(r, last) << "cost " << cost;
    last = r;
  }
  // Nonincreasing in p, so nondecreasing as p falls.
  last = 0.0;
  for (double p : {1.0, 0.95, 0.8, 0.5}) {
    const double r = separation_ratio(embed_two_layer(locs, cg, p, 2).embedding, locs);
    EXPECT_GE(r, last) << "p " << p;
    last = r;
  }
}

TEST(EmbedTwoLayer, ProvenanceAndDisplacement) {
  const auto locs = testing_support::twelve_locations();
  auto in = testing_support::open_data("synthetic_adjacency.csv");
  const auto cg = CountryBorderGraph::read_csv(in);
  const auto run = embed_two_layer(locs, cg, 0.95, 2);
  EXPECT_EQ(run.embedding.n_points(), 24u);
  EXPECT_EQ(run.embedding.provenance[13], (PointTag{1, LayerTag::border, CopyTag::single}));
  ASSERT_EQ(run.displacement.entries.size(), 12u);
  for (std::size_t i = 1; i < 12; ++i)
    EXPECT_GE(run.displacement.entries[i - 1].length, run.displacement.entries[i].length);
}

TEST(EmbedThreeLayer, AttackedPairPulledTogether) {
  const auto locs = testing_support::mirrored_border_locations();
  const auto cg = west_east();
  DenseMatrix s = DenseMatrix::Zero(14, 14);
  s(0, 1) = s(1, 0) = 4;
  for (int k : {2, 3}) {
    const auto run = embed_three_layer(locs, cg, 0.95, WeightMatrix(s, MatrixKind::directed), k);
    EXPECT_EQ(run.embedding.n_points(), 84u);
    const double pair = (location_centroid(run.embedding, 0) - location_centroid(run.embedding, 1)).norm();
    const double control = (location_centroid(run.embedding, 2) - location_centroid(run.embedding, 3)).norm();
    EXPECT_LT(pair, control) << "k " << k;
  }
}
