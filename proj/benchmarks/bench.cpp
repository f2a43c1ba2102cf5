#include "phononkin/boltzmann.hpp"
#include "phononkin/dynamics.hpp"
#include "phononkin/observables.hpp"
#include "phononkin/phonon_mc.hpp"
#include "phononkin/transport.hpp"

#include <benchmark/benchmark.h>

using namespace phononkin;

namespace {

ChainState thermal(const Lattice& lattice) {
  Rng rng = make_stream(1, 0);
  return sample_homogeneous_gaussian(lattice, equilibrium(lattice, 1.0), rng);
}

void BM_HarmonicFlow(benchmark::State& state) {
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), static_cast<std::size_t>(state.range(0)));
  ChainState s = thermal(lattice);
  for (auto _ : state) {
    harmonic_flow(lattice, s, 0.01);
    benchmark::DoNotOptimize(s.p.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HarmonicFlow)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_SplittingStep(benchmark::State& state) {
  const Lattice lattice(build_coupling(NearestNeighbor{1.0, 1.0}), static_cast<std::size_t>(state.range(0)));
  ChainState s = thermal(lattice);
  SdeConfig cfg;
  cfg.dt = 0.01;
  Rng rng = make_stream(2, 0);
  for (auto _ : state) {
    step(lattice, s, cfg, rng);
    benchmark::DoNotOptimize(s.p.data());
  }
}
BENCHMARK(BM_SplittingStep)->Arg(256)->Arg(1024);

void BM_Collision(benchmark::State& state) {
  std::vector<double> f(static_cast<std::size_t>(state.range(0)), 1.0);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] += 0.1 * static_cast<double>(j % 7);
  for (auto _ : state) benchmark::DoNotOptimize(apply_collision(f));
}
BENCHMARK(BM_Collision)->Arg(512)->Arg(8192);

void BM_PhononWalker(benchmark::State& state) {
  const CouplingModel model = build_coupling(NearestNeighbor{0.0, 1.0});
  const PhononProcess process(model, 1.0);
  Rng rng = make_stream(3, 0);
  for (auto _ : state) {
    PhononWalker w = uniform_walker(1, rng);
    process.advance(w, 100.0, rng);
    benchmark::DoNotOptimize(w.x[0]);
  }
}
BENCHMARK(BM_PhononWalker);

void BM_KineticCorrelation(benchmark::State& state) {
  const CouplingModel model = build_coupling(NearestNeighbor{1.0, 1.0});
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kinetic_current_correlation(model, 1.0, 1.0, t));
}
BENCHMARK(BM_KineticCorrelation)->Arg(1)->Arg(1000);

}  // namespace
BENCHMARK_MAIN();
