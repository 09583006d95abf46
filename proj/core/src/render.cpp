#include "vsg/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include <Eigen/Geometry>

#include "vsg/errors.hpp"

namespace vsg {

RasterImage::RasterImage(int w, int h, Rgb fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw InvalidArgument("image size must be positive");
  pixels.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  for (std::size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = fill.r;
    pixels[i + 1] = fill.g;
    pixels[i + 2] = fill.b;
  }
}

Rgb RasterImage::at(int x, int y) const {
  const auto i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + x) * 3;
  return {pixels[i], pixels[i + 1], pixels[i + 2]};
}

void RasterImage::set(int x, int y, Rgb c) {
  const auto i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + x) * 3;
  pixels[i] = c.r;
  pixels[i + 1] = c.g;
  pixels[i + 2] = c.b;
}

ObjectGeometry isolate_object(const SceneMesh& mesh, const ObjectInstance& object) {
  ObjectGeometry out;
  std::unordered_map<std::uint32_t, std::uint32_t> local;
  local.reserve(object.vertex_indices.size());
  for (auto index : object.vertex_indices) {
    if (index >= mesh.positions.size() || local.contains(index)) continue;
    local.emplace(index, static_cast<std::uint32_t>(out.positions.size()));
    out.positions.push_back(mesh.positions[index]);
    out.colors.push_back(index < mesh.colors.size() ? mesh.colors[index] : Rgb{128, 128, 128});
  }
  for (const auto& face : mesh.faces) {
    Face f{};
    bool inside = true;
    for (int k = 0; k < 3 && inside; ++k) {
      auto it = local.find(face[k]);
      inside = it != local.end();
      if (inside) f[k] = it->second;
    }
    if (inside) out.faces.push_back(f);
  }
  return out;
}

int splat_radius(int width) {
  return std::max(1, static_cast<int>(std::lround(0.004 * width)));
}

namespace {

struct Projected {
  double x = 0.0;
  double y = 0.0;
  double depth = 0.0;
  bool visible = false;
};

class Rasterizer {
 public:
  Rasterizer(const CameraPose& pose, const RenderOptions& options)
      : image_(options.width, options.height),
        depth_(static_cast<std::size_t>(options.width) * options.height,
               std::numeric_limits<double>::infinity()),
        near_(options.near_plane) {
    forward_ = pose.target - pose.position;
    if (forward_.norm() == 0.0) throw InvalidArgument("camera position equals target");
    forward_.normalize();
    right_ = forward_.cross(pose.up);
    if (right_.norm() < 1e-12) throw InvalidArgument("camera up is parallel to view direction");
    right_.normalize();
    up_ = right_.cross(forward_);
    origin_ = pose.position;
    focal_ = 0.5 * options.height /
             std::tan(0.5 * options.vertical_fov_deg * std::numbers::pi / 180.0);
    cx_ = 0.5 * options.width;
    cy_ = 0.5 * options.height;
  }

  Projected project(const Vec3& p) const {
    const Vec3 d = p - origin_;
    Projected out;
    out.depth = d.dot(forward_);
    if (out.depth <= near_) return out;
    out.x = cx_ + focal_ * d.dot(right_) / out.depth;
    out.y = cy_ - focal_ * d.dot(up_) / out.depth;
    out.visible = true;
    return out;
  }

  void splat(const Projected& p, Rgb color, int radius) {
    if (!p.visible) return;
    const int px = static_cast<int>(std::floor(p.x));
    const int py = static_cast<int>(std::floor(p.y));
    const double r2 = static_cast<double>(radius) * radius;
    for (int y = std::max(0, py - radius); y <= std::min(image_.height - 1, py + radius); ++y) {
      for (int x = std::max(0, px - radius); x <= std::min(image_.width - 1, px + radius); ++x) {
        const double dx = x + 0.5 - p.x;
        const double dy = y + 0.5 - p.y;
        if (dx * dx + dy * dy <= r2) write(x, y, p.depth, color);
      }
    }
  }

  void triangle(const std::array<Projected, 3>& v, const std::array<Rgb, 3>& c) {
    if (!v[0].visible || !v[1].visible || !v[2].visible) return;
    const double area = edge(v[0], v[1], v[2].x, v[2].y);
    if (std::abs(area) < 1e-12) return;

    const double fx0 = std::min({v[0].x, v[1].x, v[2].x});
    const double fx1 = std::max({v[0].x, v[1].x, v[2].x});
    const double fy0 = std::min({v[0].y, v[1].y, v[2].y});
    const double fy1 = std::max({v[0].y, v[1].y, v[2].y});
    if (fx1 < 0 || fy1 < 0 || fx0 >= image_.width || fy0 >= image_.height) return;
    const int x0 = std::max(0, static_cast<int>(std::floor(fx0)));
    const int x1 = std::min(image_.width - 1, static_cast<int>(std::ceil(fx1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(fy0)));
    const int y1 = std::min(image_.height - 1, static_cast<int>(std::ceil(fy1)));

    const std::array<double, 3> inv_z{1.0 / v[0].depth, 1.0 / v[1].depth, 1.0 / v[2].depth};
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double sx = x + 0.5;
        const double sy = y + 0.5;
        const double w0 = edge(v[1], v[2], sx, sy) / area;
        const double w1 = edge(v[2], v[0], sx, sy) / area;
        const double w2 = edge(v[0], v[1], sx, sy) / area;
        if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
        const double iz = w0 * inv_z[0] + w1 * inv_z[1] + w2 * inv_z[2];
        const double depth = 1.0 / iz;
        auto channel = [&](auto member) {
          const double value = (w0 * inv_z[0] * (c[0].*member) + w1 * inv_z[1] * (c[1].*member) +
                                w2 * inv_z[2] * (c[2].*member)) / iz;
          return static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
        };
        write(x, y, depth, Rgb{channel(&Rgb::r), channel(&Rgb::g), channel(&Rgb::b)});
      }
    }
  }

  RasterImage take() { return std::move(image_); }

 private:
  static double edge(const Projected& a, const Projected& b, double px, double py) {
    return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
  }

  void write(int x, int y, double depth, Rgb color) {
    auto& slot = depth_[static_cast<std::size_t>(y) * image_.width + x];
    if (depth < slot) {
      slot = depth;
      image_.set(x, y, color);
    }
  }

  RasterImage image_;
  std::vector<double> depth_;
  double near_;
  Vec3 origin_, forward_, right_, up_;
  double focal_ = 0.0, cx_ = 0.0, cy_ = 0.0;
};

}  // namespace

RasterImage render_view(const ObjectGeometry& object, const CameraPose& pose,
                        const RenderOptions& options) {
  if (options.width <= 0 || options.height <= 0) throw InvalidArgument("image size must be positive");
  if (object.positions.empty()) throw InvalidArgument("nothing to render");

  Rasterizer raster(pose, options);
  std::vector<Projected> projected;
  projected.reserve(object.positions.size());
  for (const auto& p : object.positions) projected.push_back(raster.project(p));

  std::vector<bool> in_face(object.positions.size(), false);
  for (const auto& f : object.faces) {
    raster.triangle({projected[f[0]], projected[f[1]], projected[f[2]]},
                    {object.colors[f[0]], object.colors[f[1]], object.colors[f[2]]});
    for (auto i : f) in_face[i] = true;
  }
  const int radius = splat_radius(options.width);
  for (std::size_t i = 0; i < projected.size(); ++i) {
    if (!in_face[i]) raster.splat(projected[i], object.colors[i], radius);
  }
  return raster.take();
}

std::vector<CameraPose> attribute_view_poses(const Vec3& centroid, std::span<const CameraPose> rig,
                                             std::size_t front_index) {
  if (front_index >= rig.size()) throw InvalidArgument("front index outside the rig");
  const CameraPose& front = rig[front_index];
  const Vec3 offset = front.position - centroid;
  const double radius = offset.norm();
  Vec3 heading(offset.x(), offset.y(), 0.0);
  if (heading.norm() == 0.0 || radius == 0.0) throw DegenerateInput("front pose has no azimuth");
  heading.normalize();

  auto elevated = [&](double elevation_deg) {
    const double e = elevation_deg * std::numbers::pi / 180.0;
    CameraPose pose;
    pose.position = centroid + radius * (std::cos(e) * heading + std::sin(e) * Vec3::UnitZ());
    pose.target = centroid;
    const Vec3 f = (centroid - pose.position).normalized();
    pose.up = (Vec3::UnitZ() - Vec3::UnitZ().dot(f) * f).normalized();
    return pose;
  };

  std::vector<CameraPose> poses{front, elevated(60.0), elevated(-60.0)};
  for (std::size_t i = 0; i < rig.size(); i += 2) {
    const bool duplicate = std::any_of(poses.begin(), poses.end(), [&](const CameraPose& p) {
      return (p.position - rig[i].position).norm() <= 1e-9;
    });
    if (!duplicate) poses.push_back(rig[i]);
  }
  return poses;
}

}  // namespace vsg
