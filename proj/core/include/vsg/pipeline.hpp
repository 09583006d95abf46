#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "vsg/clients.hpp"
#include "vsg/config.hpp"
#include "vsg/scene_io.hpp"
#include "vsg/types.hpp"

namespace vsg {

struct ScenePaths {
  std::filesystem::path mesh;
  std::filesystem::path segmentation;
};

using WarningSink = std::function<void(const std::string&)>;

/// load -> validate -> fronts -> attributes -> edges. Stages synchronize at
/// their boundaries; objects within a stage run on a bounded worker pool.
SceneGraph run_pipeline(const PipelineConfig& config, const ScenePaths& paths,
                        const Clients& clients, const WarningSink& warn = {});

/// Same as run_pipeline for an already loaded scene.
SceneGraph build_graph(const PipelineConfig& config, const LoadedScene& scene,
                       const Clients& clients, const WarningSink& warn = {});

}  // namespace vsg
