// One reverse step per method, square synthetic images of increasing size.

#include <benchmark/benchmark.h>

#include <cmath>

#include "revfilt/filters.hpp"
#include "revfilt/optimizers.hpp"
#include "revfilt/reverse.hpp"
#include "revfilt/spectral.hpp"

using namespace revfilt;

namespace {

Image test_image(int n) {
  Image img(n, n, 1);
  std::vector<double> v(img.size());
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      v[static_cast<std::size_t>(y) * n + x] = 0.5 + 0.25 * std::sin(0.11 * x) * std::cos(0.07 * y) +
                                              ((x / 16 + y / 16) % 2 ? 0.2 : -0.2);
    }
  }
  return Image(n, n, 1, std::move(v));
}

void run_step(benchmark::State& state, Method m) {
  const int n = static_cast<int>(state.range(0));
  const auto g = make_gaussian(1.0);
  const Image b = (*g)(test_image(n));
  MethodConfig cfg;
  cfg.method = m;
  // a full engine iteration: g(x) plus the update
  for (auto _ : state) {
    auto out = step(cfg, b, b, *g, (*g)(b));
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}

void BM_T(benchmark::State& s) { run_step(s, Method::T); }
void BM_R(benchmark::State& s) { run_step(s, Method::R); }
void BM_P(benchmark::State& s) { run_step(s, Method::P); }
void BM_TDA(benchmark::State& s) { run_step(s, Method::TDA); }
void BM_F(benchmark::State& s) { run_step(s, Method::F); }

void BM_NAG_TDA(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = make_gaussian(1.0);
  const Image b = (*g)(test_image(n));
  const ReverseOracle oracle(Method::TDA, b, g);
  const OptimizerConfig cfg = OptimizerConfig::defaults(Scheme::NAG);
  OptimizerState st = OptimizerState::zeros(b);
  for (auto _ : state) {
    auto out = scheme_step(cfg, b, st, oracle);
    benchmark::DoNotOptimize(out);
  }
}

void BM_Analyze(benchmark::State& state) {
  const Kernel k = gaussian_kernel(1.5);
  AnalysisOptions opt;
  opt.grid_height = opt.grid_width = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = analyze(k, opt);
    benchmark::DoNotOptimize(r);
  }
}

}  // namespace

BENCHMARK(BM_T)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_R)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_P)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TDA)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_F)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_NAG_TDA)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Analyze)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
