#include "vsg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vsg/errors.hpp"

namespace vsg {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double polygon_area(const std::vector<Vec2>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += cross2(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * std::abs(twice);
}

// Sutherland-Hodgman: clips `subject` against the convex counterclockwise `clip`.
std::vector<Vec2> clip_convex(std::vector<Vec2> subject, const std::array<Vec2, 4>& clip) {
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Vec2& a = clip[e];
    const Vec2& b = clip[(e + 1) % clip.size()];
    const Vec2 edge = b - a;
    auto side = [&](const Vec2& p) { return cross2(edge, p - a); };

    std::vector<Vec2> kept;
    kept.reserve(subject.size() + 2);
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Vec2& cur = subject[i];
      const Vec2& nxt = subject[(i + 1) % subject.size()];
      const double sc = side(cur);
      const double sn = side(nxt);
      if (sc >= 0.0) kept.push_back(cur);
      if ((sc >= 0.0) != (sn >= 0.0)) {
        const double t = sc / (sc - sn);
        kept.push_back(cur + t * (nxt - cur));
      }
    }
    subject = std::move(kept);
  }
  return subject;
}

}  // namespace

void RigConfig::validate() const {
  if (num_views < 3) throw InvalidArgument("rig needs at least 3 views");
  if (!(radius_scale > 0.0)) throw InvalidArgument("rig radius_scale must be positive");
  if (!(min_radius_m > 0.0)) throw InvalidArgument("rig min_radius_m must be positive");
}

double rig_radius(const Aabb& box, const RigConfig& config) {
  return std::max(config.radius_scale * box.diagonal(), config.min_radius_m);
}

double rig_azimuth(std::size_t index, int num_views) {
  return 2.0 * std::numbers::pi * static_cast<double>(index + 1) / static_cast<double>(num_views);
}

std::vector<CameraPose> rig_positions(const Vec3& centroid, double radius, int num_views) {
  if (!(radius > 0.0)) throw InvalidArgument("rig radius must be positive");
  if (num_views < 3) throw InvalidArgument("rig needs at least 3 views");

  std::vector<CameraPose> poses;
  poses.reserve(static_cast<std::size_t>(num_views));
  for (int i = 0; i < num_views; ++i) {
    const double theta = rig_azimuth(static_cast<std::size_t>(i), num_views);
    CameraPose pose;
    pose.position = centroid + radius * Vec3(std::cos(theta), std::sin(theta), 0.0);
    pose.target = centroid;
    pose.up = Vec3::UnitZ();
    poses.push_back(pose);
  }
  return poses;
}

Vec3 relative_vector(const Vec3& camera_position, const Vec3& centroid) {
  Vec3 r = camera_position - centroid;
  if (r.squaredNorm() == 0.0) throw DegenerateInput("camera position coincides with centroid");
  return r;
}

Vec3 front_direction(const Vec3& camera_position, const Vec3& centroid) {
  const Vec3 r = relative_vector(camera_position, centroid);
  return r / r.norm();
}

std::size_t disambiguate_front(std::span<const Vec3> candidates, const Vec3& centroid,
                               const Vec3& scene_center) {
  if (candidates.empty()) throw DegenerateInput("no front candidates");
  const Vec3 to_center = scene_center - centroid;
  const double center_norm = to_center.norm();
  if (center_norm == 0.0) throw DegenerateInput("scene center coincides with object centroid");

  std::size_t best = 0;
  double best_angle = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double n = candidates[i].norm();
    if (n == 0.0) throw DegenerateInput("zero-length front candidate");
    const double cosine = std::clamp(candidates[i].dot(to_center) / (n * center_norm), -1.0, 1.0);
    const double angle = std::acos(cosine);
    if (angle < best_angle) {
      best_angle = angle;
      best = i;
    }
  }
  return best;
}

std::array<Vec2, 4> OrientedBox::footprint() const {
  const Vec2 u(std::cos(yaw), std::sin(yaw));
  const Vec2 w(-u.y(), u.x());
  const Vec2 c = center.head<2>();
  const double hx = half_extents.x();
  const double hy = half_extents.y();
  return {c + hx * u - hy * w, c + hx * u + hy * w, c - hx * u + hy * w, c - hx * u - hy * w};
}

OrientedBox OrientedBox::from_aabb(const Aabb& box) {
  return OrientedBox{box.center(), 0.0, 0.5 * box.extent()};
}

OrientedBox OrientedBox::fit(std::span<const Vec3> points, const Vec3& heading) {
  if (points.empty()) throw EmptyInput("cannot fit a box to no points");
  Vec2 u(heading.x(), heading.y());
  if (u.norm() == 0.0) throw DegenerateInput("box heading has no horizontal component");
  u.normalize();
  const Vec2 w(-u.y(), u.x());

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const auto& p : points) {
    const Vec3 local(u.dot(p.head<2>()), w.dot(p.head<2>()), p.z());
    lo = lo.cwiseMin(local);
    hi = hi.cwiseMax(local);
  }
  const Vec3 mid = 0.5 * (lo + hi);
  OrientedBox box;
  const Vec2 c = mid.x() * u + mid.y() * w;
  box.center = Vec3(c.x(), c.y(), mid.z());
  box.yaw = std::atan2(u.y(), u.x());
  box.half_extents = 0.5 * (hi - lo);
  return box;
}

double footprint_overlap_ratio(const OrientedBox& a, const OrientedBox& b) {
  const double smaller = std::min(a.footprint_area(), b.footprint_area());
  if (!(smaller > 0.0)) return 0.0;
  const auto fa = a.footprint();
  std::vector<Vec2> poly(fa.begin(), fa.end());
  const auto clipped = clip_convex(std::move(poly), b.footprint());
  if (clipped.size() < 3) return 0.0;
  return std::clamp(polygon_area(clipped) / smaller, 0.0, 1.0);
}

double signed_planar_angle_deg(const Vec2& from, const Vec2& to) {
  const double deg = std::atan2(cross2(from, to), from.dot(to)) * kRadToDeg;
  return deg <= -180.0 ? 180.0 : deg;
}

PairGeometry pair_geometry(const Vec3& subject_centroid, const OrientedBox& subject_box,
                           const Vec3& object_centroid, const OrientedBox& object_box,
                           const Vec3& object_front) {
  const Vec3 v = subject_centroid - object_centroid;
  PairGeometry pg;
  pg.distance_m = v.norm();
  if (pg.distance_m == 0.0) throw DegenerateInput("subject and object centroids coincide");

  const Vec2 front_xy = object_front.head<2>();
  if (front_xy.norm() == 0.0) throw InvalidArgument("object front has no horizontal component");

  const Vec2 v_xy = v.head<2>();
  if (v_xy.norm() < 1e-12) {
    pg.planar_degenerate = true;
    pg.signed_planar_angle_deg = 0.0;
  } else {
    pg.signed_planar_angle_deg = signed_planar_angle_deg(front_xy, v_xy);
  }
  pg.elevation_delta_m = subject_centroid.z() - object_centroid.z();
  pg.horizontal_overlap_ratio = footprint_overlap_ratio(subject_box, object_box);
  return pg;
}

PairGeometry pair_geometry(const Vec3& subject_centroid, const Aabb& subject_box,
                           const Vec3& object_centroid, const Aabb& object_box,
                           const Vec3& object_front) {
  return pair_geometry(subject_centroid, OrientedBox::from_aabb(subject_box), object_centroid,
                       OrientedBox::from_aabb(object_box), object_front);
}

Vec3 RigidZ::rotate(const Vec3& v) const {
  const double c = std::cos(angle_rad);
  const double s = std::sin(angle_rad);
  return Vec3(c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z());
}

Vec3 RigidZ::apply(const Vec3& p) const { return rotate(p) + translation; }

}  // namespace vsg
