#include <random>

#include <benchmark/benchmark.h>

#include "stylecast/ensemble.hpp"
#include "stylecast/features.hpp"
#include "stylecast/metrics.hpp"
#include "stylecast/split.hpp"
#include "stylecast/synthgen.hpp"

namespace {

using namespace stylecast;

FeatureMatrix random_matrix(std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols; ++c) names.push_back("x" + std::to_string(c));
  FeatureMatrix m(names);
  std::vector<double> row(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto& v : row) v = n(rng);
    m.add_row({"i" + std::to_string(r), 0}, row, std::max(0.0, 2 + row[0] - row[1] + n(rng)));
  }
  return m;
}

void BM_FitTree(benchmark::State& state) {
  const FeatureMatrix m = random_matrix(static_cast<std::size_t>(state.range(0)), 40);
  const SortedColumns sorted(m);
  std::vector<double> g(m.rows()), h(m.rows(), 1.0);
  for (std::size_t r = 0; r < m.rows(); ++r) g[r] = -m.target()[r];
  std::vector<std::uint32_t> mult(m.rows(), 1);
  EnsembleConfig config;
  for (auto _ : state) {
    std::mt19937_64 rng(3);
    benchmark::DoNotOptimize(fit_tree(sorted, g, h, mult, config, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitTree)->Arg(1000)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_KendallTau(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> d(0, 1000);
  std::vector<double> x(static_cast<std::size_t>(state.range(0))), y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = d(rng);
    y[i] = x[i] + d(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallTau)->RangeMultiplier(4)->Range(256, 1 << 18)->Complexity(benchmark::oNLogN);

void BM_BuildFeatureMatrix(benchmark::State& state) {
  GenConfig gen;
  gen.n_items = static_cast<int>(state.range(0));
  gen.n_article_types = 1;
  const Catalog catalog = generate(gen);
  const SplitResult split = split_by_go_live(catalog, {});
  const FeatureConfig config;
  const Catalog* parts[] = {&split.train, &split.valid, &split.test};
  const Assortment assortment = Assortment::from_catalogs(parts, config);
  const FeatureStats stats = FeatureStats::fit(split.train, assortment);
  const AttributeEncoder encoder = fit_encoder(split.train.items(), config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_matrix(split.train, assortment, encoder, stats, config));
  }
}
BENCHMARK(BM_BuildFeatureMatrix)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
