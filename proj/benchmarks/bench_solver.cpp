#include <benchmark/benchmark.h>

#include "mnp/baselines.hpp"
#include "mnp/centroid.hpp"
#include "mnp/linalg.hpp"
#include "mnp/solver.hpp"

namespace {

mnp::Instance rect(mnp::Index m, bool capacitated, std::uint64_t seed = 1) {
  return mnp::generate({mnp::Shape::rectangular, m, 2 * m, capacitated, std::nullopt, seed});
}

void solve_with(benchmark::State& state, mnp::UpdateKind kind, mnp::MappingKind mapping, bool capacitated) {
  const mnp::Instance inst = rect(state.range(0), capacitated);
  mnp::SolverConfig cfg;
  cfg.rule.kind = kind;
  cfg.mapping.kind = mapping;
  cfg.record_trace = false;
  long major = 0, minor = 0;
  for (auto _ : state) {
    const mnp::SolveReport rep = mnp::solve(inst, cfg);
    major = rep.major_cycles;
    minor = rep.minor_cycles_total;
    benchmark::DoNotOptimize(rep.objective);
  }
  state.counters["major"] = static_cast<double>(major);
  state.counters["minor"] = static_cast<double>(minor);
}

void BM_SolvePgLocalNorm(benchmark::State& state) {
  solve_with(state, mnp::UpdateKind::projected_gradient, mnp::MappingKind::local_norm, false);
}
void BM_SolvePgOblivious(benchmark::State& state) {
  solve_with(state, mnp::UpdateKind::projected_gradient, mnp::MappingKind::oblivious, false);
}
void BM_SolveCoordinate(benchmark::State& state) {
  solve_with(state, mnp::UpdateKind::coordinate, mnp::MappingKind::local_norm, false);
}
void BM_SolveFrankWolfeCapacitated(benchmark::State& state) {
  solve_with(state, mnp::UpdateKind::frank_wolfe, mnp::MappingKind::local_norm, true);
}

void BM_BaselinePfg(benchmark::State& state) {
  const mnp::Instance inst = rect(state.range(0), false);
  mnp::BaselineConfig cfg;
  cfg.method = mnp::BaselineMethod::pfg;
  for (auto _ : state) benchmark::DoNotOptimize(mnp::run_baseline(inst, cfg).objective);
}

void BM_MinNormLeastSquares(benchmark::State& state) {
  const mnp::Instance inst = rect(state.range(0), false);
  // Half the columns: the typical free set of a stable point.
  const mnp::Matrix cols = inst.a().leftCols(inst.rows() / 2);
  for (auto _ : state) benchmark::DoNotOptimize(mnp::min_norm_least_squares(cols, inst.b()));
}

void BM_WeightedConstrainedLS(benchmark::State& state) {
  const mnp::Instance inst = rect(state.range(0), false);
  const mnp::Matrix cols = inst.a();  // wide, so the null space is nontrivial
  const mnp::Vector anchor = mnp::Vector::Constant(cols.cols(), 0.5);
  const mnp::Vector weights = mnp::Vector::LinSpaced(cols.cols(), 1.0, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(mnp::weighted_constrained_ls(cols, inst.b(), anchor, weights));
}

void BM_Centroid(benchmark::State& state, mnp::MappingKind kind) {
  const mnp::Instance inst = rect(state.range(0), false);
  mnp::Vector x = mnp::Vector::Zero(inst.cols());
  x.head(inst.rows()).setConstant(0.3);
  const mnp::Iterate it = mnp::make_iterate(inst, x);
  for (auto _ : state) benchmark::DoNotOptimize(mnp::centroid(inst, it, {kind}));
}

void BM_SpectralNorm(benchmark::State& state) {
  const mnp::Instance inst = rect(state.range(0), false);
  for (auto _ : state) benchmark::DoNotOptimize(mnp::spectral_norm(inst.a()));
}

}  // namespace

BENCHMARK(BM_SolvePgLocalNorm)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolvePgOblivious)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveCoordinate)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveFrankWolfeCapacitated)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BaselinePfg)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinNormLeastSquares)->Arg(50)->Arg(100)->Arg(200);
BENCHMARK(BM_WeightedConstrainedLS)->Arg(50)->Arg(100);
BENCHMARK_CAPTURE(BM_Centroid, oblivious, mnp::MappingKind::oblivious)->Arg(50)->Arg(100);
BENCHMARK_CAPTURE(BM_Centroid, local_norm, mnp::MappingKind::local_norm)->Arg(50)->Arg(100);
BENCHMARK(BM_SpectralNorm)->Arg(50)->Arg(100);
BENCHMARK_MAIN();
