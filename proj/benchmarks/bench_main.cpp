#include <benchmark/benchmark.h>

#include "amc/model.hpp"
#include "amc/scenarios.hpp"
#include "amc/verifier.hpp"

namespace {

amc::ScenarioConfig imp_config(int agents) {
  amc::ScenarioConfig cfg;
  cfg.attack = amc::AttackKind::impersonator;
  cfg.agents = agents;
  return cfg;
}

void BM_compose_ring(benchmark::State &state) {
  auto cfg = imp_config(static_cast<int>(state.range(0)));
  auto v = amc::gen_system(cfg);
  for (auto _ : state) {
    amc::GlobalModel m = amc::compose(*v.system);
    benchmark::DoNotOptimize(m.state_count());
    state.counters["states"] = static_cast<double>(m.state_count());
  }
}
BENCHMARK(BM_compose_ring)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_verify_auto_phi(benchmark::State &state) {
  auto cfg = imp_config(2);
  auto v = amc::gen_system(cfg);
  amc::GlobalModel m = amc::compose(*v.system);
  auto variant = state.range(0) == 1 ? amc::PhiVariant::all_of
                                     : amc::PhiVariant::any_of;
  auto classified = amc::classify(amc::phi(cfg, variant), *v.system);
  for (auto _ : state) {
    auto report = amc::verify(m, *classified.formula);
    benchmark::DoNotOptimize(report.verdict.value);
  }
}
BENCHMARK(BM_verify_auto_phi)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_exact_engine(benchmark::State &state) {
  auto cfg = imp_config(2);
  auto v = amc::gen_system(cfg);
  amc::GlobalModel m = amc::compose(*v.system);
  auto classified =
      amc::classify(amc::phi(cfg, amc::PhiVariant::all_of), *v.system);
  for (auto _ : state) {
    auto verdict = amc::verify_exact(m, *classified.formula);
    benchmark::DoNotOptimize(verdict.value);
  }
}
BENCHMARK(BM_exact_engine)->Unit(benchmark::kMillisecond);

void BM_epistemic_partition(benchmark::State &state) {
  auto cfg = imp_config(3);
  auto v = amc::gen_system(cfg);
  amc::GlobalModel m = amc::compose(*v.system);
  int intruder = v.system->agent_index("Imp");
  int coalition[] = {intruder};
  for (auto _ : state) {
    auto classes = amc::epistemic_partition(m, coalition);
    benchmark::DoNotOptimize(classes.size());
  }
}
BENCHMARK(BM_epistemic_partition)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
