#include <benchmark/benchmark.h>

#include "graphprobe/algorithms.hpp"
#include "graphprobe/probes.hpp"
#include "graphprobe/trainers.hpp"
#include "graphprobe/wl_kernel.hpp"

using namespace graphprobe;

namespace {

Graph sparse_graph(std::size_t n, double mean_degree, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.push_back({static_cast<NodeId>(rng.below(v)), v});
  const auto extra = static_cast<std::size_t>(mean_degree * static_cast<double>(n) / 2.0);
  for (std::size_t k = 0; k < extra; ++k) {
    const auto a = static_cast<NodeId>(rng.below(n));
    const auto b = static_cast<NodeId>(rng.below(n));
    if (a != b) edges.push_back({a, b});
  }
  return Graph(n, edges);
}

EmbeddingMatrix gaussian(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(n, dim);
  for (double& v : m.data()) v = rng.normal();
  return EmbeddingMatrix(std::move(m), "bench");
}

void BM_Betweenness(benchmark::State& state) {
  const Graph g = sparse_graph(static_cast<std::size_t>(state.range(0)), 4.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(betweenness_centrality(g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Betweenness)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_Eigenvector(benchmark::State& state) {
  const Graph g = sparse_graph(static_cast<std::size_t>(state.range(0)), 4.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvector_centrality(g));
}
BENCHMARK(BM_Eigenvector)->RangeMultiplier(4)->Range(256, 16384);

void BM_ShortestPaths(benchmark::State& state) {
  const Graph g = sparse_graph(static_cast<std::size_t>(state.range(0)), 4.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(shortest_paths_bounded(g, 3));
}
BENCHMARK(BM_ShortestPaths)->RangeMultiplier(4)->Range(256, 16384);

void BM_WlRelabel(benchmark::State& state) {
  const Graph g = sparse_graph(static_cast<std::size_t>(state.range(0)), 4.0, 4);
  for (auto _ : state) {
    WlLabelTable table;
    benchmark::DoNotOptimize(wl_relabel(g, 3, table));
  }
}
BENCHMARK(BM_WlRelabel)->RangeMultiplier(4)->Range(256, 16384);

void BM_CentralityProbe(benchmark::State& state) {
  const std::size_t n = 300;
  const Graph g = sparse_graph(n, 6.0, 5);
  const auto emb = gaussian(n, static_cast<std::size_t>(state.range(0)), 6);
  const auto c = eigenvector_centrality(g);
  ProbeConfig cfg;
  TrainConfig tc;
  tc.epochs = 20;
  for (auto _ : state) benchmark::DoNotOptimize(centrality_probe(c, emb, cfg, tc));
}
BENCHMARK(BM_CentralityProbe)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DistanceProbe(benchmark::State& state) {
  const std::size_t n = 200;
  const Graph g = sparse_graph(n, 3.0, 7);
  const auto emb = gaussian(n, static_cast<std::size_t>(state.range(0)), 8);
  ProbeConfig cfg;
  TrainConfig tc;
  tc.epochs = 20;
  for (auto _ : state) benchmark::DoNotOptimize(distance_probe(g, emb, cfg, tc));
}
BENCHMARK(BM_DistanceProbe)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
