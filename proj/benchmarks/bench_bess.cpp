#include <benchmark/benchmark.h>

#include <cmath>

#include "bess/fixtures.hpp"
#include "bess/milp/lp_format.hpp"
#include "bess/milp/simplex.hpp"
#include "bess/optimize.hpp"
#include "bess/oracle.hpp"
#include "bess/strategy.hpp"

using namespace bess;

namespace {

const Instance& fixture_week() {
  static const Instance week = [] {
    const ProfilePair p = synthetic_profiles();
    return make_instance(p.pv, p.load);
  }();
  return week;
}

Instance fixture_day(int n) {
  const Instance& week = fixture_week();
  Instance day = day_instance(week, 0, week.ess.soc_init);
  if (n == 96) return day;
  // Average down to n steps.
  const int k = 96 / n;
  const Horizon h(1, n);
  std::vector<double> pv(n, 0.0), load(n, 0.0);
  for (int t = 0; t < 96; ++t) {
    pv[t / k] += day.pv[t] / k;
    load[t / k] += day.load[t] / k;
  }
  return make_instance(Profile(ProfileKind::Pv, pv, h), Profile(ProfileKind::Load, load, h));
}

void BM_BuildModel(benchmark::State& state) {
  const Instance in = fixture_day(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_model(in));
}
BENCHMARK(BM_BuildModel)->Arg(24)->Arg(96)->Unit(benchmark::kMicrosecond);

void BM_RootRelaxation(benchmark::State& state) {
  const BuiltModel b = build_model(fixture_day(static_cast<int>(state.range(0))));
  std::uint64_t iterations = 0;
  for (auto _ : state) {
    const milp::Solution s = milp::solve_lp_relaxation(b.model);
    iterations = s.stats.simplex_iterations;
    benchmark::DoNotOptimize(s.objective_value);
  }
  state.counters["pivots"] = static_cast<double>(iterations);
}
BENCHMARK(BM_RootRelaxation)->Arg(24)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_OptimizeDay(benchmark::State& state) {
  const Instance in = fixture_day(static_cast<int>(state.range(0)));
  OptimizeOptions o;
  o.solver.node_limit = 20;
  for (auto _ : state) benchmark::DoNotOptimize(optimize(in, o).report.f);
}
BENCHMARK(BM_OptimizeDay)->Arg(24)->Arg(96)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_LpRoundTrip(benchmark::State& state) {
  const BuiltModel b = build_model(fixture_day(96));
  for (auto _ : state) benchmark::DoNotOptimize(milp::read_lp(milp::write_lp(b.model)));
}
BENCHMARK(BM_LpRoundTrip)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const DiscretizedInstance d = random_oracle_instance(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_optimal(d).objective);
}
BENCHMARK(BM_Oracle)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_BaselineWeek(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(baseline_schedule(fixture_week()));
}
BENCHMARK(BM_BaselineWeek)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
