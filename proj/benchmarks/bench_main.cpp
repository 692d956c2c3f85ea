#include <benchmark/benchmark.h>

#include "gravinv/inversion.hpp"
#include "gravinv/synthdata.hpp"

using namespace gravinv;

namespace {

struct Fixture {
  SyntheticCase truth = reference_case();
  SensitivityMatrix g = assemble_sensitivity(truth.grid, truth.stations);
  Vector exact = forward_map(g, truth.model).values;
  Vector sigma = noise_sigmas(exact, 0.03, 0.001);
  Vector observed = add_noise(exact, sigma, 1);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

// Grid of state.range(0) columns by a fifth as many rows, one station per column.
void BM_AssembleSensitivity(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SurveyGrid grid(n, n / 5, 10.0);
  const StationSet stations = StationSet::centered_over(grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_sensitivity(grid, stations));
  }
}
BENCHMARK(BM_AssembleSensitivity)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_GsvdDiagonal(benchmark::State& state) {
  const Fixture& f = fixture();
  const Matrix gt = data_weights(f.sigma).asDiagonal() * f.g.matrix();
  const auto d = StabilizerOperator::diagonal(depth_weights(f.truth.grid, 0.6, 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(gsvd_factorize(gt, d, {.compute_v = false}));
}
BENCHMARK(BM_GsvdDiagonal)->Unit(benchmark::kMillisecond);

void BM_GsvdSmoothness(benchmark::State& state) {
  const Fixture& f = fixture();
  const Matrix gt = data_weights(f.sigma).asDiagonal() * f.g.matrix();
  const Vector ones = Vector::Ones(static_cast<Eigen::Index>(f.truth.grid.cell_count()));
  const auto d = smoothness_operator(f.truth.grid, ones, depth_weights(f.truth.grid, 0.6, 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(gsvd_factorize(gt, d, {.compute_v = false}));
}
BENCHMARK(BM_GsvdSmoothness)->Unit(benchmark::kMillisecond);

void BM_Invert(benchmark::State& state) {
  const Fixture& f = fixture();
  InversionConfig cfg;
  cfg.param_method = state.range(0) == 0 ? ParamMethod::lcurve : ParamMethod::gcv;
  for (auto _ : state) benchmark::DoNotOptimize(invert(f.g, f.observed, f.sigma, cfg));
}
BENCHMARK(BM_Invert)->Arg(0)->Arg(1)->ArgName("gcv")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
