#include <benchmark/benchmark.h>

#include <random>

#include "permmap/geo.hpp"
#include "permmap/graphs.hpp"
#include "permmap/layers.hpp"
#include "permmap/spectral.hpp"

using namespace permmap;

namespace {

// Random sites over a West African sized box, split into four countries on a chain.
std::vector<Location> sites(std::size_t n) {
  std::mt19937_64 g(1234);
  std::uniform_real_distribution<double> lat(4.0, 24.0), lon(-17.0, 15.0);
  const char* countries[] = {"A", "B", "C", "D"};
  std::vector<Location> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lon(g);
    const auto c = static_cast<std::size_t>(std::min(3.0, (x + 17.0) / 8.0));
    out.push_back({i, lat(g), x, countries[c], "d" + std::to_string(i)});
  }
  return out;
}

CountryBorderGraph chain() {
  CountryBorderGraph g;
  g.add_border("A", "B");
  g.add_border("B", "C");
  g.add_border("C", "D");
  return g;
}

WeightMatrix random_sequence(std::size_t n) {
  std::mt19937_64 g(99);
  DenseMatrix s = DenseMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t e = 0; e < 4 * n; ++e) {
    const auto i = static_cast<Eigen::Index>(g() % n), j = static_cast<Eigen::Index>(g() % n);
    if (i != j) s(i, j) += 1.0;
  }
  return WeightMatrix(s, MatrixKind::directed);
}

void BM_DistanceMatrix(benchmark::State& state) {
  const auto locs = sites(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(distance_matrix(locs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DistanceMatrix)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

void BM_EmbedGeo(benchmark::State& state) {
  const auto locs = sites(static_cast<std::size_t>(state.range(0)));
  const auto borders = chain();
  for (auto _ : state) benchmark::DoNotOptimize(embed_geo(locs, &borders, 100.0, 2));
}
BENCHMARK(BM_EmbedGeo)->Arg(100)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ThreeLayerAssembly(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto locs = sites(n);
  const auto dist = invert_distances(distance_matrix(locs));
  const auto border = border_permeability_matrix(crossings_matrix(locs, chain()), 0.95);
  const auto seq = random_sequence(n);
  for (auto _ : state) benchmark::DoNotOptimize(build_three_layer(border, dist, seq));
}
BENCHMARK(BM_ThreeLayerAssembly)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_IterativeSolver(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto locs = sites(n);
  const auto dist = invert_distances(distance_matrix(locs));
  const auto border = border_permeability_matrix(crossings_matrix(locs, chain()), 0.95);
  const SparseMatrix lap = laplacian(build_three_layer(border, dist, random_sequence(n)).assembled);
  for (auto _ : state) benchmark::DoNotOptimize(eigensolve_iterative(lap, 3));
}
BENCHMARK(BM_IterativeSolver)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
