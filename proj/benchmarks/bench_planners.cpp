#include <benchmark/benchmark.h>

#include "oomi/domains.hpp"
#include "oomi/planners.hpp"

namespace {

void BM_ValueIterationHanoi(benchmark::State& state) {
  const int discs = static_cast<int>(state.range(0));
  const oomi::Mdp mdp = oomi::hanoi_mdp(discs, false);
  const oomi::ModelSet base = oomi::action_models(mdp);
  const oomi::ModelMatrix floor = oomi::true_value_model(mdp);
  oomi::PlannerConfig cfg;
  std::uint64_t sweeps = 0;
  for (auto _ : state) {
    const auto r = oomi::optimality_iterate_value(base, floor, cfg);
    sweeps += r.sweeps;
  }
  state.counters["states_per_s"] = benchmark::Counter(
      static_cast<double>(sweeps * mdp.n), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ValueIterationHanoi)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_OomiHanoi(benchmark::State& state) {
  const int discs = static_cast<int>(state.range(0));
  const bool stochastic = state.range(1) != 0;
  const oomi::Mdp mdp = oomi::hanoi_mdp(discs, stochastic);
  const oomi::ModelSet base = oomi::action_models(mdp);
  const auto subgoals = oomi::hanoi_subgoals(discs);
  const oomi::ModelMatrix floor = oomi::true_value_model(mdp);
  oomi::PlannerConfig cfg;
  cfg.eps = 1e-6;
  cfg.exact = !stochastic;
  cfg.prune = stochastic ? 1e-10 : cfg.prune;
  for (auto _ : state) benchmark::DoNotOptimize(oomi::oomi(base, subgoals, floor, cfg));
}
BENCHMARK(BM_OomiHanoi)->Args({6, 0})->Args({4, 1})->Unit(benchmark::kMillisecond);

void BM_OomiNineRooms(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const oomi::Mdp mdp = oomi::nine_rooms_mdp(level, false);
  const oomi::ModelSet base = oomi::action_models(mdp);
  const oomi::ModelMatrix floor = oomi::true_value_model(mdp);
  std::vector<oomi::SubgoalSpec> subgoals{{"G-", floor, std::nullopt, true}};
  for (auto& g : oomi::nine_rooms_subgoals(level)) subgoals.push_back(std::move(g));
  oomi::PlannerConfig cfg;
  cfg.exact = true;
  for (auto _ : state) benchmark::DoNotOptimize(oomi::oomi(base, subgoals, floor, cfg));
}
BENCHMARK(BM_OomiNineRooms)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
