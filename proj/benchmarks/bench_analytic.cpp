#include <benchmark/benchmark.h>

#include "fasep/catalan.hpp"
#include "fasep/coupling.hpp"
#include "fasep/exact.hpp"
#include "fasep/final_measure.hpp"
#include "fasep/height.hpp"
#include "fasep/kmc.hpp"
#include "fasep/rng.hpp"

using namespace fasep;

static void BM_RecordSet(benchmark::State& state) {
  const auto L = state.range(0);
  Rng rng(3);
  const auto cfg = kmc::sample_uniform_ring(L, L / 4, rng);
  for (auto _ : state) {
    const auto records = record_set(cfg);
    benchmark::DoNotOptimize(records.sites.size());
  }
  state.SetItemsProcessed(state.iterations() * L);
}
BENCHMARK(BM_RecordSet)->Arg(10000)->Arg(1000000);

static void BM_FinalConfigTasep(benchmark::State& state) {
  const auto L = state.range(0);
  Rng rng(5);
  const auto cfg = kmc::sample_uniform_ring(L, L / 4, rng);
  for (auto _ : state) {
    const auto final_cfg = final_config_tasep(cfg);
    benchmark::DoNotOptimize(final_cfg.size());
  }
  state.SetItemsProcessed(state.iterations() * L);
}
BENCHMARK(BM_FinalConfigTasep)->Arg(10000)->Arg(1000000);

static void BM_SubstitutionRoundTrip(benchmark::State& state) {
  const auto L = state.range(0);
  Rng rng(9);
  const auto cfg = kmc::sample_uniform_ring(L, L / 2, rng);
  for (auto _ : state) {
    const auto img =
        coupling::apply_substitution(coupling::SubstitutionMap::HighDensity, cfg)
            .first;
    const auto back =
        coupling::invert_substitution(coupling::SubstitutionMap::HighDensity, img);
    benchmark::DoNotOptimize(back.size());
  }
  state.SetItemsProcessed(state.iterations() * L);
}
BENCHMARK(BM_SubstitutionRoundTrip)->Arg(100000);

static void BM_AbsorptionSolve(benchmark::State& state) {
  const auto L = state.range(0);
  const auto N = state.range(1);
  const auto space = exact::StateSpace::enumerate(L, N);
  const auto gen =
      exact::build_generator(space, Rational(1, 2), exact::Model::Fasep);
  const auto initial = exact::uniform_distribution(space);
  for (auto _ : state) {
    const auto dist = exact::absorption_distribution(initial, gen, space);
    benchmark::DoNotOptimize(dist.size());
  }
}
BENCHMARK(BM_AbsorptionSolve)->Args({8, 3})->Args({10, 4});

static void BM_StationarySolve(benchmark::State& state) {
  const auto space = exact::StateSpace::enumerate(10, 6);
  const auto gen =
      exact::build_generator(space, Rational(3, 4), exact::Model::Fasep);
  for (auto _ : state) {
    const auto st = exact::stationary_distribution(gen, space);
    benchmark::DoNotOptimize(st.distribution.size());
  }
}
BENCHMARK(BM_StationarySolve);

static void BM_RingFinalMeasure(benchmark::State& state) {
  for (auto _ : state) {
    const auto m = ring_final_measure(10, 4);
    benchmark::DoNotOptimize(m.size());
  }
}
BENCHMARK(BM_RingFinalMeasure);

BENCHMARK_MAIN();
