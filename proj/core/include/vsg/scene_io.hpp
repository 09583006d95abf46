#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "vsg/types.hpp"

namespace vsg {

struct LoadedScene {
  std::string name;
  SceneMesh mesh;
  std::vector<ObjectInstance> instances;
};

/// Segmentation records from a JSON document:
///   {"scene_center": [x,y,z] (optional), "instances": [{"id", "label", "vertex_indices"}]}
struct Segmentation {
  std::optional<Vec3> scene_center;
  struct Record {
    int id = 0;
    std::string label;
    std::vector<std::uint32_t> vertex_indices;
  };
  std::vector<Record> records;
};

Segmentation parse_segmentation(const nlohmann::json& document);
Segmentation read_segmentation(const std::filesystem::path& path);
nlohmann::json to_json(const Segmentation& segmentation);

/// Parses both files and derives centroids and boxes. Scene center is the
/// segmentation override or the vertex mean. Does not validate.
LoadedScene load_scene(const std::filesystem::path& mesh_path,
                       const std::filesystem::path& segmentation_path);

LoadedScene assemble_scene(std::string name, SceneMesh mesh, const Segmentation& segmentation);

}  // namespace vsg
