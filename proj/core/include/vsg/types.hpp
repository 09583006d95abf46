#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace vsg {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

using Face = std::array<std::uint32_t, 3>;

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }
  double diagonal() const { return extent().norm(); }
  bool contains(const Vec3& p, double tol = 0.0) const;

  /// Tight box around `points`. Throws EmptyInput for an empty range.
  static Aabb from_points(std::span<const Vec3> points);

  friend bool operator==(const Aabb& a, const Aabb& b) { return a.min == b.min && a.max == b.max; }
};

/// Colored vertices, triangle faces and the reference center of one scene.
struct SceneMesh {
  std::vector<Vec3> positions;
  std::vector<Rgb> colors;
  std::vector<Face> faces;
  Vec3 scene_center = Vec3::Zero();

  std::size_t vertex_count() const { return positions.size(); }

  /// Mean of all vertex positions; zero for an empty mesh.
  static Vec3 mean_center(std::span<const Vec3> positions);
};

/// One segmented object. `front`, when set, is a horizontal unit vector.
struct ObjectInstance {
  int id = 0;
  std::string class_label;
  std::vector<std::uint32_t> vertex_indices;
  Vec3 centroid = Vec3::Zero();
  Aabb aabb;
  std::optional<Vec3> front;
  std::optional<double> front_confidence;
};

/// Builds an instance whose centroid and box come from the referenced vertices.
/// Indices outside the mesh are kept (so validation can report them) but ignored
/// when computing the centroid and box.
ObjectInstance make_instance(const SceneMesh& mesh, int id, std::string class_label,
                             std::vector<std::uint32_t> vertex_indices);

struct AttributeSet {
  std::string color;
  std::string geometry;
  std::string functionality;
  std::string structural_details;
  std::string caption;
  std::map<std::string, std::string> extra;

  friend bool operator==(const AttributeSet&, const AttributeSet&) = default;
};

struct Node {
  int id = 0;
  std::string class_label;
  AttributeSet attributes;
  Vec3 centroid = Vec3::Zero();
  Aabb aabb;
  std::optional<Vec3> front;
  std::optional<double> front_confidence;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  int subject_id = 0;
  int object_id = 0;
  std::string relation;
  double distance_m = 0.0;
  double angle_deg = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct SceneGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  nlohmann::json metadata = nlohmann::json::object();

  /// Index of the node with `id`, if any.
  std::optional<std::size_t> find_node(int id) const;

  friend bool operator==(const SceneGraph&, const SceneGraph&) = default;
};

/// Quantities describing a subject's placement relative to an object.
struct PairGeometry {
  double distance_m = 0.0;
  double signed_planar_angle_deg = 0.0;
  double elevation_delta_m = 0.0;
  double horizontal_overlap_ratio = 0.0;
  /// Set when the subject sits straight above/below the object, so the planar
  /// angle is undefined and reported as 0.
  bool planar_degenerate = false;
};

/// Node view of an instance, carrying the given attributes.
Node to_node(const ObjectInstance& object, AttributeSet attributes);

}  // namespace vsg
