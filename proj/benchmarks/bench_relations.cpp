#include <benchmark/benchmark.h>

#include "vsg/relations.hpp"
#include "vsg/synthetic.hpp"

namespace {

void BM_BuildEdges(benchmark::State& state) {
  const auto scene = vsg::synthetic::build_scene(vsg::synthetic::grid_layout(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(vsg::build_edges(scene.instances, scene.mesh, {}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1));
}
BENCHMARK(BM_BuildEdges)->Arg(8)->Arg(21)->Arg(60);

}  // namespace
