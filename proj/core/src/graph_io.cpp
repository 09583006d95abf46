#include "vsg/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "vsg/errors.hpp"

namespace vsg {
namespace {

using nlohmann::json;

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json attributes_json(const AttributeSet& a) {
  return {{"color", a.color},
          {"geometry", a.geometry},
          {"functionality", a.functionality},
          {"structural_details", a.structural_details},
          {"caption", a.caption},
          {"extra", a.extra}};
}

// Typed accessors that report the JSON pointer of the first mismatch.
const json& member(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError("required field missing", path + "/" + key);
  return *it;
}

void expect_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError("expected an object", path);
}

void expect_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError("expected an array", path);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError("expected a number", path);
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError("expected an integer", path);
  const auto wide = v.get<long long>();
  if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max()) {
    throw SchemaError("integer out of range", path);
  }
  return static_cast<int>(wide);
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError("expected a string", path);
  return v.get<std::string>();
}

Vec3 as_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw SchemaError("expected an array of 3 numbers", path);
  return {as_number(v[0], path + "/0"), as_number(v[1], path + "/1"), as_number(v[2], path + "/2")};
}

AttributeSet parse_attributes(const json& v, const std::string& path) {
  expect_object(v, path);
  AttributeSet a;
  a.color = as_string(member(v, "color", path), path + "/color");
  a.geometry = as_string(member(v, "geometry", path), path + "/geometry");
  a.functionality = as_string(member(v, "functionality", path), path + "/functionality");
  a.structural_details =
      as_string(member(v, "structural_details", path), path + "/structural_details");
  a.caption = as_string(member(v, "caption", path), path + "/caption");
  if (auto it = v.find("extra"); it != v.end()) {
    expect_object(*it, path + "/extra");
    for (const auto& [key, value] : it->items()) {
      a.extra[key] = as_string(value, path + "/extra/" + key);
    }
  }
  return a;
}

Node parse_node(const json& v, const std::string& path) {
  expect_object(v, path);
  Node n;
  n.id = as_int(member(v, "id", path), path + "/id");
  n.class_label = as_string(member(v, "label", path), path + "/label");
  n.attributes = parse_attributes(member(v, "attributes", path), path + "/attributes");
  n.centroid = as_vec3(member(v, "centroid", path), path + "/centroid");
  const auto& box = member(v, "aabb", path);
  expect_object(box, path + "/aabb");
  n.aabb.min = as_vec3(member(box, "min", path + "/aabb"), path + "/aabb/min");
  n.aabb.max = as_vec3(member(box, "max", path + "/aabb"), path + "/aabb/max");
  if (auto it = v.find("front"); it != v.end() && !it->is_null()) n.front = as_vec3(*it, path + "/front");
  if (auto it = v.find("front_confidence"); it != v.end() && !it->is_null()) {
    n.front_confidence = as_number(*it, path + "/front_confidence");
  }
  return n;
}

Edge parse_edge(const json& v, const std::string& path) {
  expect_object(v, path);
  Edge e;
  e.subject_id = as_int(member(v, "subject", path), path + "/subject");
  e.object_id = as_int(member(v, "object", path), path + "/object");
  e.relation = as_string(member(v, "relation", path), path + "/relation");
  e.distance_m = as_number(member(v, "distance_m", path), path + "/distance_m");
  e.angle_deg = as_number(member(v, "angle_deg", path), path + "/angle_deg");
  return e;
}

}  // namespace

json graph_to_json(const SceneGraph& graph) {
  json nodes = json::array();
  for (const auto& n : graph.nodes) {
    nodes.push_back({{"id", n.id},
                     {"label", n.class_label},
                     {"attributes", attributes_json(n.attributes)},
                     {"centroid", vec_json(n.centroid)},
                     {"aabb", {{"min", vec_json(n.aabb.min)}, {"max", vec_json(n.aabb.max)}}},
                     {"front", n.front ? vec_json(*n.front) : json(nullptr)},
                     {"front_confidence", n.front_confidence ? json(*n.front_confidence) : json(nullptr)}});
  }
  json edges = json::array();
  for (const auto& e : graph.edges) {
    edges.push_back({{"subject", e.subject_id},
                     {"object", e.object_id},
                     {"relation", e.relation},
                     {"distance_m", e.distance_m},
                     {"angle_deg", e.angle_deg}});
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"metadata", graph.metadata}};
}

SceneGraph graph_from_json(const json& document) {
  expect_object(document, "");
  SceneGraph graph;
  const auto& nodes = member(document, "nodes", "");
  expect_array(nodes, "/nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    graph.nodes.push_back(parse_node(nodes[i], "/nodes/" + std::to_string(i)));
  }
  const auto& edges = member(document, "edges", "");
  expect_array(edges, "/edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    graph.edges.push_back(parse_edge(edges[i], "/edges/" + std::to_string(i)));
  }
  if (auto it = document.find("metadata"); it != document.end()) {
    expect_object(*it, "/metadata");
    graph.metadata = *it;
  }
  return graph;
}

std::string dump_graph(const SceneGraph& graph) { return graph_to_json(graph).dump(2) + "\n"; }

void save_graph(const SceneGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write graph", path.string());
  out << dump_graph(graph);
  if (!out) throw IoError("failed writing graph", path.string());
}

SceneGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph", path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), "byte " + std::to_string(e.byte));
  }
  return graph_from_json(document);
}

}  // namespace vsg
