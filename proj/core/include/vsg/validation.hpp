#pragma once

#include <span>
#include <string>
#include <vector>

#include "vsg/types.hpp"

namespace vsg {

/// Checks mesh and instance invariants. Returns one message per violation;
/// an empty list means the scene is valid.
std::vector<std::string> validate_scene(const SceneMesh& mesh,
                                        std::span<const ObjectInstance> instances);

struct GraphValidationOptions {
  /// Also require one edge per ordered node pair.
  bool require_dense = false;
  double distance_tolerance_m = 1e-6;
};

std::vector<std::string> validate_graph(const SceneGraph& graph,
                                        const GraphValidationOptions& options = {});

}  // namespace vsg
