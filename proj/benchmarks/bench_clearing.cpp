#include <benchmark/benchmark.h>

#include "gridclear/random_case.hpp"
#include "gridclear/settlement.hpp"

using namespace gridclear;

namespace {

Case sized_case(std::int64_t nodes) {
  RandomCaseOptions o;
  o.min_nodes = o.max_nodes = static_cast<std::size_t>(nodes);
  return generate_random_case(static_cast<std::uint64_t>(nodes) * 7919u, o);
}

void BM_Ptdf(benchmark::State& state) {
  const Case c = sized_case(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_ptdf(c));
}
BENCHMARK(BM_Ptdf)->RangeMultiplier(2)->Range(4, 64);

void BM_SolveStandard(benchmark::State& state) {
  const MarketLp m = build_market(sized_case(state.range(0)), ModelKind::kStandard);
  std::size_t iterations = 0;
  for (auto _ : state) {
    const LpSolution s = solve(m.lp);
    iterations = s.iterations;
    benchmark::DoNotOptimize(s.objective);
  }
  state.counters["pivots"] = static_cast<double>(iterations);
}
BENCHMARK(BM_SolveStandard)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMicrosecond);

void BM_ClearEnhanced(benchmark::State& state) {
  const Case c = sized_case(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(clear_case(c, ModelKind::kEnhanced).objective);
}
BENCHMARK(BM_ClearEnhanced)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMicrosecond);

// Clear, decompose, settle and audit: the full `gridclear audit` pipeline.
void BM_SettleAndAudit(benchmark::State& state) {
  const Case c = sized_case(state.range(0));
  const GdfTable gdfs = compute_gdf_table(c);
  const ClearingResult r = clear_case(c, ModelKind::kEnhanced);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decompose_lmp(r, &gdfs));
    benchmark::DoNotOptimize(settle(r, gdfs, PaymentScheme::kDualConsistent));
    benchmark::DoNotOptimize(audit_identities(r, gdfs));
  }
}
BENCHMARK(BM_SettleAndAudit)->Arg(8)->Arg(32);

void BM_BuildDual(benchmark::State& state) {
  const MarketLp m = build_market(sized_case(state.range(0)), ModelKind::kEnhanced);
  for (auto _ : state) benchmark::DoNotOptimize(build_dual(m.lp));
}
BENCHMARK(BM_BuildDual)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
