#include "vsg/scene_io.hpp"

#include <fstream>

#include "vsg/errors.hpp"
#include "vsg/ply.hpp"

namespace vsg {
namespace {

using nlohmann::json;

Vec3 parse_vec3(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 3) throw ParseError("expected [x, y, z]", where);
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!value[i].is_number()) throw ParseError("expected a number", where + "/" + std::to_string(i));
    out[i] = value[i].get<double>();
  }
  return out;
}

}  // namespace

Segmentation parse_segmentation(const json& document) {
  if (!document.is_object()) throw ParseError("segmentation must be a JSON object", "");
  Segmentation seg;
  if (auto it = document.find("scene_center"); it != document.end() && !it->is_null()) {
    seg.scene_center = parse_vec3(*it, "/scene_center");
  }
  auto it = document.find("instances");
  if (it == document.end() || !it->is_array()) throw ParseError("missing instances array", "/instances");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const auto& rec = (*it)[i];
    const std::string where = "/instances/" + std::to_string(i);
    if (!rec.is_object()) throw ParseError("instance must be an object", where);
    Segmentation::Record out;
    auto id = rec.find("id");
    if (id == rec.end() || !id->is_number_integer()) throw ParseError("missing integer id", where + "/id");
    out.id = id->get<int>();
    auto label = rec.find("label");
    if (label == rec.end() || !label->is_string()) throw ParseError("missing string label", where + "/label");
    out.label = label->get<std::string>();
    auto idx = rec.find("vertex_indices");
    if (idx == rec.end() || !idx->is_array()) {
      throw ParseError("missing vertex_indices array", where + "/vertex_indices");
    }
    out.vertex_indices.reserve(idx->size());
    for (std::size_t k = 0; k < idx->size(); ++k) {
      const auto& v = (*idx)[k];
      if (!v.is_number_unsigned()) {
        throw ParseError("vertex index must be a non-negative integer",
                         where + "/vertex_indices/" + std::to_string(k));
      }
      out.vertex_indices.push_back(v.get<std::uint32_t>());
    }
    seg.records.push_back(std::move(out));
  }
  return seg;
}

Segmentation read_segmentation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open segmentation", path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), "byte " + std::to_string(e.byte));
  }
  return parse_segmentation(document);
}

json to_json(const Segmentation& segmentation) {
  json doc = json::object();
  if (segmentation.scene_center) {
    const auto& c = *segmentation.scene_center;
    doc["scene_center"] = {c.x(), c.y(), c.z()};
  }
  json instances = json::array();
  for (const auto& rec : segmentation.records) {
    instances.push_back({{"id", rec.id}, {"label", rec.label}, {"vertex_indices", rec.vertex_indices}});
  }
  doc["instances"] = std::move(instances);
  return doc;
}

LoadedScene assemble_scene(std::string name, SceneMesh mesh, const Segmentation& segmentation) {
  LoadedScene scene;
  scene.name = std::move(name);
  if (segmentation.scene_center) mesh.scene_center = *segmentation.scene_center;
  scene.instances.reserve(segmentation.records.size());
  for (const auto& rec : segmentation.records) {
    scene.instances.push_back(make_instance(mesh, rec.id, rec.label, rec.vertex_indices));
  }
  scene.mesh = std::move(mesh);
  return scene;
}

LoadedScene load_scene(const std::filesystem::path& mesh_path,
                       const std::filesystem::path& segmentation_path) {
  auto mesh = read_ply(mesh_path);
  const auto seg = read_segmentation(segmentation_path);
  return assemble_scene(mesh_path.stem().string(), std::move(mesh), seg);
}

}  // namespace vsg
