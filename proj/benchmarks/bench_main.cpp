#include <benchmark/benchmark.h>

#include "magicfreq/angular.hpp"
#include "magicfreq/magic.hpp"
#include "magicfreq/moments.hpp"

using namespace magicfreq;

static void BM_Wigner6j(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(wigner6j(half(1), half(3), 1, 5, 4, half(7)));
}
BENCHMARK(BM_Wigner6j);

static void BM_Rates(benchmark::State& state) {
  const AbsorptionModel m(bundled_species("cs_d2"), 4, BroadeningModel::doppler(295));
  double d = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.rates(d, {0.7, 0.2}));
    d += 1e5;
  }
}
BENCHMARK(BM_Rates);

static void BM_VoigtRates(benchmark::State& state) {
  const AbsorptionModel m(bundled_species("rb87_d2"), 2, BroadeningModel::voigt(295, 35e6, -30e6));
  double d = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.rates(d, {0.7, 0.2}));
    d += 1e5;
  }
}
BENCHMARK(BM_VoigtRates);

static void BM_FindMagicFrequencies(benchmark::State& state) {
  const auto line = bundled_species("rb87_d2");
  for (auto _ : state)
    benchmark::DoNotOptimize(find_magic_frequencies(line, 2, BroadeningModel::doppler(295), {-600e6, 600e6}));
}
BENCHMARK(BM_FindMagicFrequencies)->Unit(benchmark::kMillisecond);

static void BM_MomentRoundTrip(benchmark::State& state) {
  const auto rho = DensityMatrix::uniform(4);
  for (auto _ : state) benchmark::DoNotOptimize(moments_to_density(density_to_moments(rho), 4));
}
BENCHMARK(BM_MomentRoundTrip);
BENCHMARK_MAIN();
