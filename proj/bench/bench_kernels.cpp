// Serial reference kernels against their OpenMP counterparts. The second
// benchmark argument selects the path: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include <random>

#include "vexp/bayes.hpp"
#include "vexp/covariance.hpp"
#include "vexp/forecast.hpp"
#include "vexp/mle.hpp"

using namespace vexp;

namespace {

Exec exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Exec::serial : Exec::parallel;
}

CepstralModel bench_model(Index m, Index q) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  auto draw = [&] {
    Matrix a(m, m);
    for (Index i = 0; i < a.size(); ++i) a.data()[i] = u(rng);
    return a;
  };
  std::vector<Matrix> w;
  for (Index k = 0; k < q; ++k) w.push_back(draw());
  const Matrix s = draw();
  return CepstralModel(0.5 * (s + s.transpose()), std::move(w));
}

void BM_SpectralGrid(benchmark::State& state) {
  const CepstralModel model = bench_model(3, 4);
  const auto lambdas = frequency_grid(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_grid(model, lambdas, exec_of(state)));
}
BENCHMARK(BM_SpectralGrid)->ArgsProduct({{256, 2048}, {0, 1}});

void BM_WhittleGrid(benchmark::State& state) {
  const CepstralModel model = bench_model(2, 4);
  const DataPanel data = simulate(model, Vector::Zero(2), state.range(0), 3);
  const WhittleGrid grid(data);
  for (auto _ : state) benchmark::DoNotOptimize(grid.deviance(model, exec_of(state)));
}
BENCHMARK(BM_WhittleGrid)->ArgsProduct({{192, 1024}, {0, 1}});

void BM_Gradient(benchmark::State& state) {
  const CepstralModel model = bench_model(2, state.range(0));
  const DataPanel data = simulate(model, Vector::Zero(2), 192, 4);
  const Objective f = make_objective(data, state.range(0), ObjectiveKind::gaussian);
  const Vector x = to_vector(model);
  for (auto _ : state) benchmark::DoNotOptimize(fd_gradient(f, x, 1e-6, exec_of(state)));
}
BENCHMARK(BM_Gradient)->ArgsProduct({{2, 4}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Hessian(benchmark::State& state) {
  const CepstralModel model = bench_model(2, state.range(0));
  const DataPanel data = simulate(model, Vector::Zero(2), 192, 5);
  const Objective f = make_objective(data, state.range(0), ObjectiveKind::approx_whittle);
  const Vector x = to_vector(model);
  for (auto _ : state) benchmark::DoNotOptimize(numerical_hessian(f, x, 1e-4, exec_of(state)));
}
BENCHMARK(BM_Hessian)->ArgsProduct({{2, 4}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_PosteriorCoherence(benchmark::State& state) {
  const CepstralModel model = bench_model(2, 4);
  const DataPanel data = simulate(model, Vector::Zero(2), 120, 6);
  McmcConfig mc;
  mc.iterations = 400;
  mc.burn_in = 100;
  const Chain chain = mcmc_run(data, 4, {}, SsvsConfig{}, mc);
  const auto lambdas = frequency_grid(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(posterior_coherence(chain, lambdas, 0, 1, 0.95, 1, exec_of(state)));
  }
}
BENCHMARK(BM_PosteriorCoherence)->ArgsProduct({{256}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
