#include <benchmark/benchmark.h>

#include "vsg/render.hpp"
#include "vsg/synthetic.hpp"

namespace {

void BM_RenderChair(benchmark::State& state) {
  const auto scene = vsg::synthetic::build_scene(vsg::synthetic::grid_layout(2));
  const auto& chair = scene.instances[1];
  const auto geometry = vsg::isolate_object(scene.mesh, chair);
  const auto poses = vsg::rig_positions(chair.centroid, vsg::rig_radius(chair.aabb, {}), 12);
  vsg::RenderOptions options;
  options.width = options.height = static_cast<int>(state.range(0));
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(vsg::render_view(geometry, poses[k++ % poses.size()], options));
  }
}
BENCHMARK(BM_RenderChair)->Arg(128)->Arg(512);

}  // namespace
