#include <benchmark/benchmark.h>

#include <cmath>

#include "rpde/calculus.hpp"
#include "rpde/solver.hpp"

using namespace rpde;

namespace {

SpectralField initial(std::size_t cutoff) {
  return field_from_function(1, cutoff, [](std::span<const double> x) {
    return std::sin(x[0]) + 0.5 * std::cos(2.0 * x[0]);
  });
}

ControlledPath geometric(const RoughPath& X, const SpaceScale& sc) {
  ControlledPath p{X.grid(), {}, {}, 0.5, X.alpha()};
  const auto y0 = initial(sc.cutoff);
  for (std::size_t i = 0; i <= X.steps(); ++i) {
    auto y = std::exp(X.x()[i]) * semigroup_apply(y0, X.grid()[i], sc);
    p.y_prime.push_back(y);
    p.y.push_back(std::move(y));
  }
  return p;
}

}  // namespace

static void BM_FbmLift(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fbm_lift({0.45, n, 1.0, ++seed}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FbmLift)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_ChenDefect(benchmark::State& state) {
  const RoughPath X = fbm_lift({0.45, static_cast<std::size_t>(state.range(0)), 1.0, 1});
  const auto table = materialize_x2_table(X);
  for (auto _ : state) benchmark::DoNotOptimize(chen_defect(table, X.x()));
}
BENCHMARK(BM_ChenDefect)->Arg(64)->Arg(128)->Arg(256);

static void BM_MultiplySmooth(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = initial(n), g = initial(n);
  for (auto _ : state) benchmark::DoNotOptimize(multiply_smooth(u, g));
}
BENCHMARK(BM_MultiplySmooth)->Arg(8)->Arg(32)->Arg(128);

static void BM_GubinelliNorm(benchmark::State& state) {
  const SpaceScale sc{1, 8, 0.0};
  const RoughPath X = fbm_lift({0.45, static_cast<std::size_t>(state.range(0)), 1.0, 2});
  const auto p = geometric(X, sc);
  for (auto _ : state) benchmark::DoNotOptimize(gubinelli_norm(p, X));
}
BENCHMARK(BM_GubinelliNorm)->Arg(64)->Arg(128)->Arg(256);

static void BM_RoughConvolutionPath(benchmark::State& state) {
  const SpaceScale sc{1, 8, 0.0};
  const RoughPath X = fbm_lift({0.45, 256, 1.0, 3});
  const auto p = geometric(X, sc);
  const auto depth = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rough_convolution_path(p, X, sc, depth));
}
BENCHMARK(BM_RoughConvolutionPath)->DenseRange(0, 4, 2);

static void BM_GlobalSolve(benchmark::State& state) {
  SolverConfig cfg;
  cfg.alpha = 0.44;
  cfg.scale = {1, 8, 0.0};
  const RoughPath X = fbm_lift({0.45, static_cast<std::size_t>(state.range(0)), 1.0, 11, 0.44});
  const auto coeffs = with_pointwise_drift(scalar_linear_diffusion(0.5),
                                           [](double u) { return 0.5 * std::sin(u); });
  const auto y0 = initial(8);
  for (auto _ : state) benchmark::DoNotOptimize(global_solve(y0, coeffs, X, cfg));
}
BENCHMARK(BM_GlobalSolve)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
