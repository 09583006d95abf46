#include "vsg/front_estimator.hpp"

#include <algorithm>

#include "vsg/errors.hpp"

namespace vsg {

void FrontEstimateConfig::validate() const {
  rig.validate();
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidArgument("front threshold must be in [0,1]");
  if (render.width <= 0 || render.height <= 0) throw InvalidArgument("render size must be positive");
}

FrontEstimate estimate_front(const ObjectInstance& object, const SceneMesh& mesh,
                             const FrontEstimateConfig& config, VisionModel& vision,
                             const ReferenceDatabase* references, bool keep_views) {
  config.validate();
  const auto geometry = isolate_object(mesh, object);
  if (geometry.positions.empty()) {
    throw DegenerateInput("object " + std::to_string(object.id) + " has no vertices");
  }
  if (Aabb::from_points(geometry.positions).diagonal() == 0.0) {
    throw DegenerateInput("object " + std::to_string(object.id) + ": all vertices coincide");
  }

  FrontEstimate result;
  result.rig = rig_positions(object.centroid, rig_radius(object.aabb, config.rig), config.rig.num_views);

  std::vector<RasterImage> views;
  views.reserve(result.rig.size());
  for (const auto& pose : result.rig) views.push_back(render_view(geometry, pose, config.render));

  std::optional<RasterImage> reference;
  if (references) reference = lookup_reference(*references, object.class_label);
  result.no_reference = !reference.has_value();

  result.judgment = vision.identify_front_view(reference ? &*reference : nullptr, views, object.class_label);
  const auto& conf = result.judgment.per_view_confidence;
  if (conf.size() != views.size()) {
    throw ResponseParseError("front-view judgment has " + std::to_string(conf.size()) +
                                 " scores for " + std::to_string(views.size()) + " views",
                             "");
  }

  std::vector<std::size_t> above;
  for (std::size_t i = 0; i < conf.size(); ++i) {
    if (conf[i] > config.threshold) above.push_back(i);
  }

  if (above.size() == 1) {
    result.chosen_view = above.front();
  } else if (above.size() > 1) {
    result.ambiguous = true;
    if ((mesh.scene_center - object.centroid).norm() == 0.0) {
      // No direction toward the scene center; keep the most confident candidate.
      result.chosen_view = *std::max_element(above.begin(), above.end(), [&](auto a, auto b) {
        return conf[a] < conf[b];
      });
    } else {
      std::vector<Vec3> candidates;
      candidates.reserve(above.size());
      for (auto i : above) candidates.push_back(relative_vector(result.rig[i].position, object.centroid));
      result.chosen_view = above[disambiguate_front(candidates, object.centroid, mesh.scene_center)];
    }
  } else {
    result.low_confidence = true;
    result.chosen_view = result.judgment.best_index;
  }

  result.front = front_direction(result.rig[result.chosen_view].position, object.centroid);
  result.confidence = conf[result.chosen_view];
  if (keep_views) result.views = std::move(views);
  return result;
}

}  // namespace vsg
