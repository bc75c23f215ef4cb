#include <benchmark/benchmark.h>

#include <random>

#include "oomi/model.hpp"

namespace {

using oomi::ModelMatrix;

ModelMatrix random_model(std::size_t n, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> reward(n);
  std::vector<std::vector<double>> trans(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    reward[s] = u(rng);
    double sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (u(rng) < density) sum += (trans[s][t] = u(rng));
    }
    if (sum > 0.0) {
      for (double& p : trans[s]) p *= 0.9 / sum;
    }
  }
  return ModelMatrix::from_dense(std::move(reward), trans);
}

void BM_ComposeSparse(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const ModelMatrix a = random_model(n, 4.0 / static_cast<double>(n), rng);
  const ModelMatrix b = random_model(n, 4.0 / static_cast<double>(n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(oomi::compose(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ComposeSparse)->Arg(256)->Arg(1024)->Arg(4096);

void BM_ComposeDense(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  const ModelMatrix a = random_model(n, 1.0, rng);
  const ModelMatrix b = random_model(n, 1.0, rng);
  for (auto _ : state) benchmark::DoNotOptimize(oomi::compose(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_ComposeDense)->Arg(32)->Arg(128);

void BM_Argmax(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::vector<ModelMatrix> ms;
  for (int k = 0; k < 8; ++k) ms.push_back(random_model(n, 4.0 / static_cast<double>(n), rng));
  const oomi::ModelSet set(std::move(ms));
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(rng() % 100);
  const ModelMatrix value = ModelMatrix::value_model(v);
  for (auto _ : state) benchmark::DoNotOptimize(oomi::argmax_model(set, value));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Argmax)->Arg(1024)->Arg(16384);

}  // namespace
