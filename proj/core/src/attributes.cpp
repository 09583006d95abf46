#include "vsg/attributes.hpp"

#include "vsg/errors.hpp"
#include "vsg/text.hpp"

namespace vsg {

AttributeExtractionError::AttributeExtractionError(int object_id, std::vector<std::size_t> failed,
                                                   const std::string& first_cause,
                                                   bool service_failure)
    : Error([&] {
        std::vector<std::string> ids;
        for (auto i : failed) ids.push_back(std::to_string(i));
        return "attribute extraction failed for every view of object " + std::to_string(object_id) +
               " (views " + join(ids, ", ") + "): " + first_cause;
      }()),
      failed_(std::move(failed)),
      service_failure_(service_failure) {}

AttributeOutcome extract_object_attributes(const ObjectInstance& object, const SceneMesh& mesh,
                                           std::span<const CameraPose> rig, std::size_t front_index,
                                           VisionModel& vision, TextModel* consolidator,
                                           const RenderOptions& render) {
  const auto geometry = isolate_object(mesh, object);
  const auto poses = attribute_view_poses(object.centroid, rig, front_index);

  AttributeOutcome outcome;
  outcome.view_count = poses.size();
  std::vector<ViewAttributes> records;
  std::string first_cause;
  bool service_failure = false;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    try {
      records.push_back(vision.extract_view_attributes(render_view(geometry, poses[i], render),
                                                       object.class_label));
    } catch (const ServiceError& e) {
      if (first_cause.empty()) first_cause = e.what();
      service_failure = true;
      outcome.failed_views.push_back(i);
    } catch (const ResponseParseError& e) {
      if (first_cause.empty()) first_cause = e.what();
      outcome.failed_views.push_back(i);
    }
  }
  if (records.empty()) throw AttributeExtractionError(object.id, outcome.failed_views, first_cause, service_failure);

  outcome.attributes = aggregate_attributes(records, consolidator);
  if (outcome.attributes.caption.empty()) outcome.attributes.caption = object.class_label;
  return outcome;
}

}  // namespace vsg
