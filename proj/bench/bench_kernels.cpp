// Serial reference vs OpenMP kernel on the trial loops behind the checks.

#include <benchmark/benchmark.h>

#include "giry/metric.hpp"
#include "giry/parallel.hpp"
#include "giry/space_file.hpp"

namespace {

using namespace giry;

const SpaceEntry& entry(const char* id) {
  static const Registry reg = builtin_registry();
  return reg.at(id);
}

/// Sampled two-point compat trials on the box: no failure, so every trial runs.
template <bool Parallel>
void compat_trials(benchmark::State& state) {
  const auto& e = entry("box");
  const auto& s = *e.space;
  const auto& grid = default_p_grid();
  const auto n = static_cast<std::size_t>(state.range(0));
  auto trial = [&](std::size_t idx) {
    auto rng = trial_rng(1, idx);
    const auto& p = grid[rng() % grid.size()];
    auto x = s.sample(rng), y = s.sample(rng), z = s.sample(rng);
    return e.metric(s.combine2(p, x, z), s.combine2(p, y, z)) > e.metric(x, y).scale(p);
  };
  for (auto _ : state) {
    auto hit = Parallel ? omp::first_failure(n, trial) : serial::first_failure(n, trial);
    benchmark::DoNotOptimize(hit);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_compat_serial(benchmark::State& s) { compat_trials<false>(s); }
void BM_compat_omp(benchmark::State& s) { compat_trials<true>(s); }

void BM_equiv_Nmin(benchmark::State& state) {
  const auto& e = entry("N-min");
  for (auto _ : state) benchmark::DoNotOptimize(equiv_check(*e.space, e.metric));
}

}  // namespace

BENCHMARK(BM_compat_serial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_compat_omp)->Arg(1000)->Arg(10000);
BENCHMARK(BM_equiv_Nmin)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
