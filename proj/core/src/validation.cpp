#include "vsg/validation.hpp"

#include <cmath>
#include <set>
#include <string>

namespace vsg {
namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

std::string obj_name(int id) { return "instance " + std::to_string(id); }

void check_front(const std::optional<Vec3>& front, const std::optional<double>& confidence,
                 const std::string& who, std::vector<std::string>& out) {
  if (front) {
    if (!finite(*front) || std::abs(front->norm() - 1.0) > 1e-9) {
      out.push_back(who + ": front is not a unit vector");
    }
    if (std::abs(front->z()) > 1e-9) out.push_back(who + ": front is not horizontal");
  }
  if (confidence && !(*confidence >= 0.0 && *confidence <= 1.0)) {
    out.push_back(who + ": front_confidence outside [0,1]");
  }
}

void check_box(const Aabb& box, const Vec3& centroid, const std::string& who,
               std::vector<std::string>& out) {
  if (!finite(box.min) || !finite(box.max) || !finite(centroid)) {
    out.push_back(who + ": non-finite centroid or box");
    return;
  }
  if (!(box.min.array() <= box.max.array()).all()) {
    out.push_back(who + ": aabb min exceeds max");
  } else if (!box.contains(centroid, 1e-9)) {
    out.push_back(who + ": centroid lies outside aabb");
  }
}

}  // namespace

std::vector<std::string> validate_scene(const SceneMesh& mesh,
                                        std::span<const ObjectInstance> instances) {
  std::vector<std::string> out;
  const auto n = mesh.positions.size();

  if (mesh.colors.size() != n) out.push_back("mesh: color count does not match vertex count");
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    for (auto index : mesh.faces[f]) {
      if (index >= n) {
        out.push_back("mesh: face " + std::to_string(f) + " references vertex " +
                      std::to_string(index) + " of " + std::to_string(n));
        break;
      }
    }
  }
  if (!finite(mesh.scene_center)) out.push_back("mesh: scene_center is not finite");

  if (instances.empty()) {
    out.push_back("no instances");
    return out;
  }

  std::set<int> seen;
  for (const auto& obj : instances) {
    const auto who = obj_name(obj.id);
    if (obj.id < 0) out.push_back(who + ": negative id");
    if (!seen.insert(obj.id).second) out.push_back(who + ": duplicate id");
    if (obj.class_label.empty()) out.push_back(who + ": empty class label");
    if (obj.vertex_indices.empty()) {
      out.push_back(who + ": no vertices");
      continue;
    }
    std::size_t bad = 0;
    std::uint32_t first_bad = 0;
    for (auto index : obj.vertex_indices) {
      if (index >= n) {
        if (bad++ == 0) first_bad = index;
      }
    }
    if (bad > 0) {
      out.push_back(who + ": " + std::to_string(bad) + " vertex index(es) out of range (first " +
                    std::to_string(first_bad) + ", mesh has " + std::to_string(n) + ")");
      continue;
    }
    check_box(obj.aabb, obj.centroid, who, out);
    check_front(obj.front, obj.front_confidence, who, out);
  }
  return out;
}

std::vector<std::string> validate_graph(const SceneGraph& graph,
                                        const GraphValidationOptions& options) {
  std::vector<std::string> out;
  std::set<int> ids;
  for (const auto& node : graph.nodes) {
    const auto who = "node " + std::to_string(node.id);
    if (!ids.insert(node.id).second) out.push_back(who + ": duplicate id");
    if (node.class_label.empty()) out.push_back(who + ": empty class label");
    if (node.attributes.caption.empty()) out.push_back(who + ": empty caption");
    check_box(node.aabb, node.centroid, who, out);
    check_front(node.front, node.front_confidence, who, out);
  }

  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& edge = graph.edges[e];
    const auto who = "edge " + std::to_string(e);
    const auto s = graph.find_node(edge.subject_id);
    const auto o = graph.find_node(edge.object_id);
    if (!s) out.push_back(who + ": unknown subject " + std::to_string(edge.subject_id));
    if (!o) out.push_back(who + ": unknown object " + std::to_string(edge.object_id));
    if (edge.subject_id == edge.object_id) out.push_back(who + ": subject equals object");
    if (edge.relation.empty()) out.push_back(who + ": empty relation");
    if (!(edge.distance_m >= 0.0) || !std::isfinite(edge.distance_m)) {
      out.push_back(who + ": invalid distance");
    } else if (s && o) {
      const double d = (graph.nodes[*s].centroid - graph.nodes[*o].centroid).norm();
      if (std::abs(d - edge.distance_m) > options.distance_tolerance_m) {
        out.push_back(who + ": distance does not match centroids");
      }
    }
    if (!(edge.angle_deg > -180.0 && edge.angle_deg <= 180.0)) {
      out.push_back(who + ": angle outside (-180, 180]");
    }
  }

  if (options.require_dense) {
    const auto n = graph.nodes.size();
    const auto expected = n * (n == 0 ? 0 : n - 1);
    if (graph.edges.size() != expected) {
      out.push_back("graph: " + std::to_string(graph.edges.size()) + " edges, expected " +
                    std::to_string(expected));
    }
  }
  return out;
}

}  // namespace vsg
