#pragma once

#include <optional>
#include <vector>

#include "vsg/clients.hpp"
#include "vsg/geometry.hpp"
#include "vsg/render.hpp"

namespace vsg {

struct FrontEstimateConfig {
  RigConfig rig;
  /// A view is a front candidate when its confidence exceeds this.
  double threshold = 0.5;
  RenderOptions render;

  void validate() const;
};

struct FrontEstimate {
  Vec3 front = Vec3::UnitX();
  double confidence = 0.0;
  std::size_t chosen_view = 0;
  /// No view cleared the threshold; the argmax view was used.
  bool low_confidence = false;
  /// More than one view cleared the threshold; resolved toward the scene center.
  bool ambiguous = false;
  /// No reference image existed for the class.
  bool no_reference = false;
  std::vector<CameraPose> rig;
  FrontViewJudgment judgment;
  /// Rendered rig views, kept only when requested.
  std::vector<RasterImage> views;
};

/// Renders the rig around the object, asks the vision model which view is the
/// front and turns the chosen camera position into a horizontal unit vector.
FrontEstimate estimate_front(const ObjectInstance& object, const SceneMesh& mesh,
                             const FrontEstimateConfig& config, VisionModel& vision,
                             const ReferenceDatabase* references, bool keep_views = false);

}  // namespace vsg
