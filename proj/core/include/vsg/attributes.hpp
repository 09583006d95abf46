#pragma once

#include <span>
#include <vector>

#include "vsg/clients.hpp"
#include "vsg/errors.hpp"
#include "vsg/geometry.hpp"
#include "vsg/render.hpp"

namespace vsg {

struct AttributeOutcome {
  AttributeSet attributes;
  std::size_t view_count = 0;
  /// Indices (into the attribute pose list) whose extraction failed.
  std::vector<std::size_t> failed_views;
  bool partial() const { return !failed_views.empty(); }
};

/// Thrown when every attribute view failed.
class AttributeExtractionError : public Error {
 public:
  AttributeExtractionError(int object_id, std::vector<std::size_t> failed, const std::string& first_cause,
                           bool service_failure);
  const std::vector<std::size_t>& failed_views() const noexcept { return failed_; }
  /// True when at least one view failed because the service was unavailable.
  bool service_failure() const noexcept { return service_failure_; }

 private:
  std::vector<std::size_t> failed_;
  bool service_failure_;
};

/// Renders the attribute views (front, top, bottom, alternates), extracts a
/// record from each and consolidates them. Views whose extraction raises a
/// ServiceError or ResponseParseError are skipped and reported.
AttributeOutcome extract_object_attributes(const ObjectInstance& object, const SceneMesh& mesh,
                                           std::span<const CameraPose> rig, std::size_t front_index,
                                           VisionModel& vision, TextModel* consolidator,
                                           const RenderOptions& render = {});

}  // namespace vsg
