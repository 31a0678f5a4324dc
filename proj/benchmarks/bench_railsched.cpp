#include <benchmark/benchmark.h>

#include <string>

#include "railsched/anneal.hpp"
#include "railsched/derivation.hpp"
#include "railsched/exact.hpp"
#include "railsched/generate.hpp"
#include "railsched/instance_io.hpp"
#include "railsched/lp_export.hpp"
#include "railsched/penalty.hpp"

using namespace railsched;

namespace {

const std::string kData = RAILSCHED_TEST_DATA;

Instance calibration(int i) { return load_instance_file(kData + "/calibration/cal_0" + std::to_string(i) + ".json"); }

Instance line_of(int per_cycle) {
  LineOptions o;
  o.kind = LineKind::double_track;
  o.stations = 5;
  o.trains = even_train_pattern(per_cycle, 60);
  o.horizon = 180;
  return with_random_delays(gen_synthetic_line(o), 3, per_cycle, 10);
}

void BM_Derive(benchmark::State& state) {
  const Instance inst = line_of(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const DerivedTimes d = earliest_departures(inst);
    benchmark::DoNotOptimize(build_index_sets(inst, d));
  }
  state.counters["trains"] = inst.num_trains();
}
BENCHMARK(BM_Derive)->Arg(4)->Arg(8)->Arg(16);

void BM_BuildModel(benchmark::State& state) {
  const Instance inst = line_of(static_cast<int>(state.range(0)));
  int records = 0;
  for (auto _ : state) {
    const DecisionModel m = build_model(inst);
    records = static_cast<int>(m.constraints.size());
    benchmark::DoNotOptimize(m);
  }
  state.counters["records"] = records;
}
BENCHMARK(BM_BuildModel)->Arg(4)->Arg(8)->Arg(16);

void BM_ExportLp(benchmark::State& state) {
  const DecisionModel m = build_model(line_of(8));
  for (auto _ : state) benchmark::DoNotOptimize(export_lp(m));
}
BENCHMARK(BM_ExportLp);

void BM_PenaltyForm(benchmark::State& state) {
  const DecisionModel m = build_model(calibration(0));
  const Rational w = penalty_lower_bound(m) + 1;
  for (auto _ : state) benchmark::DoNotOptimize(to_penalty_form(m, w));
}
BENCHMARK(BM_PenaltyForm);

void BM_SolveExact(benchmark::State& state) {
  const DecisionModel m = build_model(calibration(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(m, 60.0));
  state.counters["binaries"] = m.num_binaries();
}
BENCHMARK(BM_SolveExact)->DenseRange(0, 9)->Unit(benchmark::kMillisecond);

// One annealing run: budget 1 with one restart per second and no idle hold.
void BM_AnnealRestart(benchmark::State& state) {
  const DecisionModel m = build_model(calibration(static_cast<int>(state.range(0))));
  AnnealParams p;
  p.budget_s = 1.0;
  p.realizations = 1;
  p.hold = false;
  p.on_qubo = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_anneal(m, p));
}
BENCHMARK(BM_AnnealRestart)->ArgsProduct({{0, 5}, {0, 1}})->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
