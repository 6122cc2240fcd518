#include <benchmark/benchmark.h>

#include "infoval/admissible.hpp"
#include "infoval/generator.hpp"
#include "infoval/oversight.hpp"
#include "infoval/scenario.hpp"

using namespace infoval;

namespace {

std::string scenario_file(const char* name) {
  return std::string(INFOVAL_SCENARIO_DIR) + "/" + name;
}

const Scenario& legume() {
  static Scenario s = load_scenario(scenario_file("legume.json"));
  return s;
}

const Scenario& s6() {
  static Scenario s = load_scenario(scenario_file("oversight-s6.json"));
  return s;
}

void BM_LoadScenario(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(load_scenario(scenario_file("factcheck.json")));
  }
}
BENCHMARK(BM_LoadScenario);

void BM_ConditionExact(benchmark::State& state) {
  const Scenario& s = legume();
  Evidence ev = Evidence{}.with(s.variable("legume_toxic"), "1");
  for (auto _ : state) {
    benchmark::DoNotOptimize(condition(s.space, ev));
  }
}
BENCHMARK(BM_ConditionExact);

void BM_SolveRecursive(benchmark::State& state) {
  const Scenario& s = legume();
  OfferLadder ladder = s.build_ladder();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_recursive(s.problem, s.space, ladder, 2, s.true_outcome));
  }
}
BENCHMARK(BM_SolveRecursive);

void BM_SolveSuccessive(benchmark::State& state) {
  const Scenario& s = legume();
  OfferLadder ladder = s.build_ladder();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_successive(s.problem, s.space, ladder, 2, s.true_outcome));
  }
}
BENCHMARK(BM_SolveSuccessive);

void BM_EnumerateAdmissible(benchmark::State& state) {
  const Scenario& s = legume();
  OfferLadder ladder = s.build_ladder();
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_exante_superiority(s.problem, s.space, ladder, 2));
  }
}
BENCHMARK(BM_EnumerateAdmissible)->Unit(benchmark::kMillisecond);

void BM_SolveSpe(benchmark::State& state) {
  const Scenario& s = s6();
  OversightInstance instance = s.build_oversight();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_spe(instance));
  }
}
BENCHMARK(BM_SolveSpe);

void BM_Inextensible(benchmark::State& state) {
  const Scenario& s = s6();
  OversightInstance instance = s.build_oversight();
  MoveHistory empty;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inextensible(instance, empty));
  }
}
BENCHMARK(BM_Inextensible);

void BM_OversightSuiteInstance(benchmark::State& state) {
  ScenarioGenerator gen(42);
  Scenario s = gen.gen_oversight_scenario();
  OversightInstance instance = s.build_oversight();
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_equilibrium_characterization(instance));
  }
}
BENCHMARK(BM_OversightSuiteInstance);

}  // namespace

BENCHMARK_MAIN();
