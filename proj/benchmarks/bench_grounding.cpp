#include <random>

#include <benchmark/benchmark.h>

#include "vsg/grounding.hpp"
#include "vsg/offline_clients.hpp"

namespace {

vsg::SceneGraph dense_graph(int n) {
  static const char* labels[] = {"chair", "table", "lamp", "sofa", "bin", "bed"};
  static const char* relations[] = {"left of, near", "behind", "in front of and to the right, far", "on"};
  std::mt19937_64 rng(11);
  vsg::SceneGraph g;
  for (int i = 0; i < n; ++i) {
    vsg::Node node;
    node.id = i + 1;
    node.class_label = labels[rng() % 6];
    g.nodes.push_back(node);
  }
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      if (i != j) g.edges.push_back({i, j, relations[rng() % 4], 1.0, 0.0});
    }
  }
  return g;
}

void BM_PruneCached(benchmark::State& state) {
  const auto graph = dense_graph(static_cast<int>(state.range(0)));
  vsg::HashingEmbeddingModel model;
  vsg::TripletEmbeddingCache cache;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vsg::prune_relations(graph, "the chair left of the lamp", 1500, model, &cache));
  }
}
BENCHMARK(BM_PruneCached)->Arg(21)->Arg(60);

void BM_PruneUncached(benchmark::State& state) {
  const auto graph = dense_graph(static_cast<int>(state.range(0)));
  vsg::HashingEmbeddingModel model;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vsg::prune_relations(graph, "the chair left of the lamp", 1500, model));
  }
}
BENCHMARK(BM_PruneUncached)->Arg(21)->Arg(60);

}  // namespace
