#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "densek/densek.hpp"

namespace {

using namespace densek;

// Uniform random graph with about avg_deg * n / 2 edges.
Graph random_graph(std::size_t n, std::size_t avg_deg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  std::vector<Edge> edges;
  edges.reserve(n * avg_deg / 2);
  while (edges.size() < n * avg_deg / 2) {
    const NodeId u = pick(rng), v = pick(rng);
    if (u != v) edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges);
}

std::vector<double> random_vector(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& e : v) e = u(rng);
  return v;
}

void BM_spmv(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = random_graph(n, 10, 1);
  const auto x = random_vector(n, 0, 1, 2);
  std::vector<double> y(n);
  for (auto _ : state) {
    spmv(g, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * g.m()));
}
BENCHMARK(BM_spmv)->RangeMultiplier(10)->Range(10'000, 1'000'000)->Unit(benchmark::kMillisecond);

void BM_prox(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const auto z = random_vector(n, -0.5, 1.5, 3);
  std::vector<double> out(n);
  TopKSelector sel;
  for (auto _ : state) {
    prox_h(z, k, 0.01, out, sel);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_prox)
    ->ArgsProduct({{100'000, 1'000'000}, {10, 100, 1000}})
    ->Unit(benchmark::kMillisecond);

void BM_pgm_step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = random_graph(n, 10, 4);
  const auto problem = SelectionProblem::dks(g, 100);
  auto s = SolverState::initial(problem, std::vector<double>(n, 1.0 / static_cast<double>(n)), 1.0);
  StepWorkspace ws;
  const StepParams params{0.01, 0.3, 1.0, 0.0};
  for (auto _ : state) {
    auto rec = pgm_step(problem, s, params, ws);
    benchmark::DoNotOptimize(rec);
  }
}
BENCHMARK(BM_pgm_step)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
