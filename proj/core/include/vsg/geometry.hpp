#pragma once

#include <array>
#include <span>
#include <vector>

#include "vsg/types.hpp"

namespace vsg {

struct CameraPose {
  Vec3 position = Vec3::Zero();
  Vec3 target = Vec3::Zero();
  Vec3 up = Vec3::UnitZ();
};

struct RigConfig {
  int num_views = 12;
  double radius_scale = 1.5;
  double min_radius_m = 0.5;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

/// Rig radius for an object with the given box: max(radius_scale * diagonal, min_radius_m).
double rig_radius(const Aabb& box, const RigConfig& config);

/// Azimuth of rig pose `index` (0-based), i.e. 2*pi*(index+1)/N.
double rig_azimuth(std::size_t index, int num_views);

/// N horizontal poses around `centroid`; pose i sits at azimuth 2*pi*(i+1)/N and
/// looks at the centroid with +Z up.
std::vector<CameraPose> rig_positions(const Vec3& centroid, double radius, int num_views);

/// camera_position - centroid. Throws DegenerateInput when the points coincide.
Vec3 relative_vector(const Vec3& camera_position, const Vec3& centroid);

/// Unit vector from `centroid` toward `camera_position`.
Vec3 front_direction(const Vec3& camera_position, const Vec3& centroid);

/// Index of the candidate with the smallest angle to (scene_center - centroid).
/// Exact ties go to the lowest index.
std::size_t disambiguate_front(std::span<const Vec3> candidates, const Vec3& centroid,
                               const Vec3& scene_center);

/// Box with a vertical axis and a heading. `half_extents` are measured along
/// (heading, left of heading, +Z).
struct OrientedBox {
  Vec3 center = Vec3::Zero();
  double yaw = 0.0;
  Vec3 half_extents = Vec3::Zero();

  double min_z() const { return center.z() - half_extents.z(); }
  double max_z() const { return center.z() + half_extents.z(); }
  double diagonal() const { return 2.0 * half_extents.norm(); }
  double footprint_area() const { return 4.0 * half_extents.x() * half_extents.y(); }
  /// Footprint corners in counterclockwise order.
  std::array<Vec2, 4> footprint() const;

  static OrientedBox from_aabb(const Aabb& box);
  /// Tightest box around `points` whose first axis is the horizontal `heading`.
  static OrientedBox fit(std::span<const Vec3> points, const Vec3& heading);
};

/// Area of the XY-intersection of two footprints divided by the smaller
/// footprint area; 0 when either footprint is degenerate.
double footprint_overlap_ratio(const OrientedBox& a, const OrientedBox& b);

/// Signed angle in degrees from `from` to `to` in the XY plane, counterclockwise
/// positive, in (-180, 180].
double signed_planar_angle_deg(const Vec2& from, const Vec2& to);

PairGeometry pair_geometry(const Vec3& subject_centroid, const OrientedBox& subject_box,
                           const Vec3& object_centroid, const OrientedBox& object_box,
                           const Vec3& object_front);

PairGeometry pair_geometry(const Vec3& subject_centroid, const Aabb& subject_box,
                           const Vec3& object_centroid, const Aabb& object_box,
                           const Vec3& object_front);

/// Rotation about +Z by `angle_rad` followed by a translation.
struct RigidZ {
  double angle_rad = 0.0;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const;
  Vec3 rotate(const Vec3& v) const;
};

}  // namespace vsg
