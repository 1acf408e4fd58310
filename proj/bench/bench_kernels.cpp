// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>

#include "tightgap/lemmas.hpp"
#include "tightgap/simulator.hpp"

using namespace tightgap;

namespace {

void lemma_check(benchmark::State& state, const char* id, bool serial) {
  LemmaTask t = lemma_task(id);
  std::uint64_t boxes = 0;
  for (auto _ : state) {
    CheckReport r = serial ? check_serial(t.root, t.criteria) : check(t.root, t.criteria);
    if (!r.verified()) state.SkipWithError("not verified");
    boxes = r.boxes_examined;
  }
  state.counters["boxes"] = double(boxes);
  state.counters["boxes/s"] = benchmark::Counter(double(boxes), benchmark::Counter::kIsIterationInvariantRate);
}

void mc(benchmark::State& state, bool serial) {
  auto c = Configuration::binary(Pred::Or, 0.1624783, 0.1624783, -0.6750434);
  std::uint64_t n = std::uint64_t(state.range(0));
  for (auto _ : state) {
    Estimate e = serial ? mc_round_thresholds_serial(c, -0.19, -0.19, n, 1) : mc_round_thresholds(c, -0.19, -0.19, n, 1);
    benchmark::DoNotOptimize(e.value);
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(n));
}

}  // namespace

BENCHMARK_CAPTURE(lemma_check, horn_hard_parallel, "horn-hard", false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(lemma_check, horn_hard_serial, "horn-hard", true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(lemma_check, horn_step2_parallel, "horn-step2", false)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK_CAPTURE(lemma_check, horn_step2_serial, "horn-step2", true)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK_CAPTURE(mc, parallel, false)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(mc, serial, true)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
