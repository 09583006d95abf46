#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "vsg/render.hpp"
#include "vsg/scene_io.hpp"

namespace vsg::synthetic {

/// Colored box in an object's local frame (front = +X, floor at z = 0).
struct Part {
  Vec3 min;
  Vec3 max;
  Rgb color;
};

/// Parts of a known class template ("chair", "table", ...). Throws InvalidArgument
/// for unknown labels.
std::vector<Part> class_template(const std::string& label);
std::vector<std::string> template_labels();

struct Placement {
  int id = 0;
  std::string label;
  /// Heading of the object's front, radians from +X.
  double yaw = 0.0;
  /// Floor position of the local origin.
  Vec3 position = Vec3::Zero();
  /// Overrides the class template when non-empty.
  std::vector<Part> parts;
};

struct Layout {
  std::string name;
  std::vector<Placement> placements;
};

/// Meshes every placement and returns the scene with true fronts on each instance.
LoadedScene build_scene(const Layout& layout);

/// The bundled room: a table with two chairs, a monitor on the table, a sofa,
/// a cabinet, a lamp and a bin.
Layout room_layout();

/// `count` axis-box objects with random sizes, positions and headings.
Layout random_box_layout(std::mt19937_64& rng, int count);

/// `count` objects of template classes on a grid, headings on the 30-degree lattice.
Layout grid_layout(int count);

/// Front view of the class template as a reference image.
RasterImage reference_image(const std::string& label, const RigConfig& rig = {},
                            const RenderOptions& render = {});

/// Writes scene.ply, segments.json and references/ (manifest + PNGs) into `directory`.
void write_bundle(const Layout& layout, const std::filesystem::path& directory);

}  // namespace vsg::synthetic
