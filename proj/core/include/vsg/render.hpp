#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vsg/geometry.hpp"
#include "vsg/types.hpp"

namespace vsg {

/// Row-major 8-bit RGB raster.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RasterImage() = default;
  RasterImage(int w, int h, Rgb fill = {255, 255, 255});

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);

  friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

/// Vertices and faces of one object, re-indexed locally.
struct ObjectGeometry {
  std::vector<Vec3> positions;
  std::vector<Rgb> colors;
  std::vector<Face> faces;
};

/// Copies the instance's vertices and every face whose three corners belong to it.
ObjectGeometry isolate_object(const SceneMesh& mesh, const ObjectInstance& object);

struct RenderOptions {
  int width = 512;
  int height = 512;
  double vertical_fov_deg = 60.0;
  double near_plane = 1e-3;
};

inline constexpr Rgb kBackground{255, 255, 255};

/// Perspective render with a depth test. Faces are filled with interpolated
/// vertex colors; vertices not used by any face are drawn as round splats.
RasterImage render_view(const ObjectGeometry& object, const CameraPose& pose,
                        const RenderOptions& options = {});

/// Splat radius in pixels for a given image width.
int splat_radius(int width);

/// Poses for attribute extraction: front, top (+60 deg), bottom (-60 deg), then
/// every even-indexed rig pose not already present.
std::vector<CameraPose> attribute_view_poses(const Vec3& centroid, std::span<const CameraPose> rig,
                                             std::size_t front_index);

}  // namespace vsg
