#include "vsg/relations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "vsg/errors.hpp"
#include "vsg/prompts.hpp"
#include "vsg/text.hpp"

namespace vsg {
namespace {

using json = nlohmann::json;

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json node_features(const Node& node) {
  return {
      {"id", node.id},
      {"label", node.class_label},
      {"centroid", vec_json(node.centroid)},
      {"aabb", {{"min", vec_json(node.aabb.min)}, {"max", vec_json(node.aabb.max)}}},
      {"front", node.front ? vec_json(*node.front) : json(nullptr)},
      {"attributes",
       {{"color", node.attributes.color},
        {"geometry", node.attributes.geometry},
        {"functionality", node.attributes.functionality},
        {"structural_details", node.attributes.structural_details},
        {"caption", node.attributes.caption}}},
  };
}

}  // namespace

void RelationRuleConfig::validate() const {
  if (!(sector_width_deg > 0.0 && sector_width_deg <= 360.0)) {
    throw InvalidArgument("sector width must be in (0, 360]");
  }
  const double sectors = 360.0 / sector_width_deg;
  if (std::abs(sectors - std::round(sectors)) > 1e-9) {
    throw InvalidArgument("sector width must divide 360");
  }
  if (!(contact_epsilon_m > 0.0)) throw InvalidArgument("contact epsilon must be positive");
  if (!(near_scale > 0.0)) throw InvalidArgument("near scale must be positive");
  if (!(overlap_min > 0.0 && overlap_min <= 1.0)) throw InvalidArgument("overlap_min must be in (0,1]");
  if (!(far_fraction > 0.0 && far_fraction <= 1.0)) throw InvalidArgument("far_fraction must be in (0,1]");
}

std::string sector_label(double angle_deg, double sector_width_deg) {
  const auto sectors = static_cast<long>(std::lround(360.0 / sector_width_deg));
  auto index = static_cast<long>(std::floor((angle_deg + 0.5 * sector_width_deg) / sector_width_deg));
  index = ((index % sectors) + sectors) % sectors;
  const double center = static_cast<double>(index) * sector_width_deg * std::numbers::pi / 180.0;

  constexpr double kEps = 1e-9;
  const double fc = std::cos(center);
  const double sc = std::sin(center);
  const bool front = fc > kEps, behind = fc < -kEps;
  const bool left = sc > kEps, right = sc < -kEps;

  if (front && left) return "in front of and to the left";
  if (front && right) return "in front of and to the right";
  if (behind && left) return "behind and to the left";
  if (behind && right) return "behind and to the right";
  if (front) return "in front of";
  if (behind) return "behind";
  return left ? "left of" : "right of";
}

double scene_span(const SceneMesh& mesh) {
  if (mesh.positions.empty()) return 0.0;
  double radius = 0.0;
  double zmin = mesh.positions.front().z();
  double zmax = zmin;
  for (const auto& p : mesh.positions) {
    radius = std::max(radius, (p - mesh.scene_center).head<2>().norm());
    zmin = std::min(zmin, p.z());
    zmax = std::max(zmax, p.z());
  }
  return std::hypot(2.0 * radius, zmax - zmin);
}

std::vector<std::string> classify_pair(const PairGeometry& pair, const OrientedBox& subject_box,
                                       const OrientedBox& object_box, double scene_span,
                                       const RelationRuleConfig& config) {
  std::vector<std::string> labels{sector_label(pair.signed_planar_angle_deg, config.sector_width_deg)};

  if (pair.horizontal_overlap_ratio >= config.overlap_min) {
    const double eps = config.contact_epsilon_m;
    if (std::abs(subject_box.min_z() - object_box.max_z()) <= eps) {
      labels.emplace_back("on");
    } else if (std::abs(subject_box.max_z() - object_box.min_z()) <= eps) {
      labels.emplace_back("under");
    } else if (subject_box.min_z() > object_box.max_z()) {
      labels.emplace_back("above");
    } else if (subject_box.max_z() < object_box.min_z()) {
      labels.emplace_back("below");
    }
  }

  const double near_bound = config.near_scale * 0.5 * (subject_box.diagonal() + object_box.diagonal());
  if (pair.distance_m <= near_bound) {
    labels.emplace_back("near");
  } else if (scene_span > 0.0 && pair.distance_m >= config.far_fraction * scene_span) {
    labels.emplace_back("far");
  }
  return labels;
}

OrientedBox object_frame_box(const SceneMesh& mesh, const ObjectInstance& object) {
  if (!object.front) return OrientedBox::from_aabb(object.aabb);
  std::vector<Vec3> points;
  points.reserve(object.vertex_indices.size());
  for (auto i : object.vertex_indices) {
    if (i < mesh.positions.size()) points.push_back(mesh.positions[i]);
  }
  if (points.empty()) return OrientedBox::from_aabb(object.aabb);
  return OrientedBox::fit(points, *object.front);
}

std::vector<Edge> build_edges(std::span<const ObjectInstance> objects, const SceneMesh& mesh,
                              const RelationRuleConfig& config, const EnrichmentOptions* enrichment) {
  config.validate();
  std::vector<OrientedBox> boxes;
  boxes.reserve(objects.size());
  for (const auto& obj : objects) {
    if (!obj.front) throw MissingFront(obj.id);
    boxes.push_back(object_frame_box(mesh, obj));
  }
  const double span = scene_span(mesh);

  std::vector<Edge> edges;
  edges.reserve(objects.size() * (objects.size() ? objects.size() - 1 : 0));
  for (std::size_t j = 0; j < objects.size(); ++j) {
    const auto& object = objects[j];
    for (std::size_t i = 0; i < objects.size(); ++i) {
      if (i == j) continue;
      const auto& subject = objects[i];
      const auto pg = pair_geometry(subject.centroid, boxes[i], object.centroid, boxes[j], *object.front);
      Edge edge;
      edge.subject_id = subject.id;
      edge.object_id = object.id;
      edge.relation = join(classify_pair(pg, boxes[i], boxes[j], span, config), ", ");
      edge.distance_m = pg.distance_m;
      edge.angle_deg = pg.signed_planar_angle_deg;
      edges.push_back(std::move(edge));
    }
  }

  if (enrichment && enrichment->model) enrich_edges(edges, *enrichment);
  return edges;
}

void enrich_edges(std::vector<Edge>& edges, const EnrichmentOptions& options) {
  if (!options.model) throw InvalidArgument("enrichment needs a text model");
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);

  std::map<int, std::string> labels;
  json nodes = json::array();
  for (const auto& node : options.nodes) {
    labels[node.id] = node.class_label;
    nodes.push_back(node_features(node));
  }
  auto label_of = [&](int id) {
    auto it = labels.find(id);
    return it == labels.end() ? std::string("object") : it->second;
  };

  const auto prompt = prompts::render(prompts::kRelationEnrichment);
  for (std::size_t start = 0; start < edges.size(); start += batch) {
    const std::size_t end = std::min(edges.size(), start + batch);
    json relations = json::array();
    for (std::size_t e = start; e < end; ++e) {
      const auto& edge = edges[e];
      relations.push_back({{"index", e},
                           {"subject", edge.subject_id},
                           {"subject_label", label_of(edge.subject_id)},
                           {"object", edge.object_id},
                           {"object_label", label_of(edge.object_id)},
                           {"relation", edge.relation},
                           {"distance_m", edge.distance_m},
                           {"angle_deg", edge.angle_deg}});
    }
    const json context = {{"nodes", nodes}, {"relations", relations}};
    const auto reply = options.model->complete_text(prompt, context.dump());
    const auto body = extract_json_object(reply);
    const json parsed = json::parse(body, nullptr, false);
    if (body.empty() || parsed.is_discarded() || !parsed.contains("relations") ||
        !parsed["relations"].is_array()) {
      throw ResponseParseError("relation enrichment reply lacks a relations array", reply);
    }
    for (const auto& item : parsed["relations"]) {
      if (!item.is_object()) continue;
      const auto index = item.find("index");
      const auto relation = item.find("relation");
      if (index == item.end() || relation == item.end() || !index->is_number_integer() ||
          !relation->is_string()) {
        continue;
      }
      const auto e = index->get<long long>();
      if (e < static_cast<long long>(start) || e >= static_cast<long long>(end)) continue;
      auto text = relation->get<std::string>();
      if (!text.empty()) edges[static_cast<std::size_t>(e)].relation = std::move(text);
    }
  }
}

}  // namespace vsg
