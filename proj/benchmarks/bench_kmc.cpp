#include <benchmark/benchmark.h>

#include "fasep/kmc.hpp"
#include "fasep/rng.hpp"

using namespace fasep;

// Event throughput of the site-associated engine at low density.
static void BM_SappEventsLowDensity(benchmark::State& state) {
  const auto L = state.range(0);
  Rng rng(7);
  const auto cfg = kmc::sample_bernoulli_window(L, 0.3, rng);
  for (auto _ : state) {
    kmc::Engine engine(cfg, {0.5}, kmc::Model::Fasep,
                       kmc::ClockScheme::SiteAssociated, 11);
    std::uint64_t budget = 200000;
    while (engine.events() < budget && engine.step()) {
    }
    benchmark::DoNotOptimize(engine.bond_current());
    state.SetItemsProcessed(state.items_processed() +
                            static_cast<std::int64_t>(engine.events()));
  }
}
BENCHMARK(BM_SappEventsLowDensity)->Arg(100000);

// Dense ring, stationary regime.
static void BM_SappEventsHighDensity(benchmark::State& state) {
  const auto L = state.range(0);
  std::vector<std::uint8_t> sites(static_cast<std::size_t>(L), 1);
  for (std::int64_t i = 0; i < L; i += 3) sites[static_cast<std::size_t>(i)] = 0;
  const LatticeConfig cfg(Topology::Ring, sites);
  for (auto _ : state) {
    kmc::Engine engine(cfg, {0.7}, kmc::Model::Fasep,
                       kmc::ClockScheme::SiteAssociated, 13);
    while (engine.events() < 200000) engine.step();
    benchmark::DoNotOptimize(engine.events());
    state.SetItemsProcessed(state.items_processed() + 200000);
  }
}
BENCHMARK(BM_SappEventsHighDensity)->Arg(1000);

static void BM_PappEvents(benchmark::State& state) {
  Rng rng(7);
  const auto cfg = kmc::sample_uniform_ring(1000, 700, rng);
  for (auto _ : state) {
    kmc::Engine engine(cfg, {0.7}, kmc::Model::Fasep,
                       kmc::ClockScheme::ParticleAssociated, 17);
    while (engine.events() < 100000) engine.step();
    benchmark::DoNotOptimize(engine.events());
    state.SetItemsProcessed(state.items_processed() + 100000);
  }
}
BENCHMARK(BM_PappEvents);

static void BM_RunToFrozen(benchmark::State& state) {
  const auto L = state.range(0);
  Rng rng(23);
  for (auto _ : state) {
    state.PauseTiming();
    auto& r = rng;
    const auto cfg = kmc::sample_uniform_ring(L, L / 4, r);
    state.ResumeTiming();
    const auto rec = kmc::run_to_frozen(cfg, {0.5},
                                        kmc::ClockScheme::SiteAssociated,
                                        rng.next());
    benchmark::DoNotOptimize(rec.events);
  }
}
BENCHMARK(BM_RunToFrozen)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
