#include "vsg/types.hpp"

#include "vsg/errors.hpp"

namespace vsg {

bool Aabb::contains(const Vec3& p, double tol) const {
  return (p.array() >= min.array() - tol).all() && (p.array() <= max.array() + tol).all();
}

Aabb Aabb::from_points(std::span<const Vec3> points) {
  if (points.empty()) throw EmptyInput("bounding box of an empty point set");
  Aabb box{points.front(), points.front()};
  for (const auto& p : points) {
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  return box;
}

Vec3 SceneMesh::mean_center(std::span<const Vec3> positions) {
  Vec3 sum = Vec3::Zero();
  for (const auto& p : positions) sum += p;
  return positions.empty() ? sum : Vec3(sum / static_cast<double>(positions.size()));
}

ObjectInstance make_instance(const SceneMesh& mesh, int id, std::string class_label,
                             std::vector<std::uint32_t> vertex_indices) {
  ObjectInstance obj;
  obj.id = id;
  obj.class_label = std::move(class_label);
  obj.vertex_indices = std::move(vertex_indices);

  std::vector<Vec3> points;
  points.reserve(obj.vertex_indices.size());
  for (auto index : obj.vertex_indices) {
    if (index < mesh.positions.size()) points.push_back(mesh.positions[index]);
  }
  if (!points.empty()) {
    obj.centroid = SceneMesh::mean_center(points);
    obj.aabb = Aabb::from_points(points);
  }
  return obj;
}

std::optional<std::size_t> SceneGraph::find_node(int id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  return std::nullopt;
}

Node to_node(const ObjectInstance& object, AttributeSet attributes) {
  Node node;
  node.id = object.id;
  node.class_label = object.class_label;
  node.attributes = std::move(attributes);
  node.centroid = object.centroid;
  node.aabb = object.aabb;
  node.front = object.front;
  node.front_confidence = object.front_confidence;
  return node;
}

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error([&] {
        std::string msg = "validation failed";
        for (const auto& v : violations) msg += "\n  - " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

}  // namespace vsg
