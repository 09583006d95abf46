#pragma once

#include <filesystem>
#include <string>

#include "vsg/types.hpp"

namespace vsg {

nlohmann::json graph_to_json(const SceneGraph& graph);

/// Inverse of graph_to_json. Throws SchemaError naming the first failing path.
SceneGraph graph_from_json(const nlohmann::json& document);

/// Serialized text, two-space indented, ending in a newline.
std::string dump_graph(const SceneGraph& graph);

void save_graph(const SceneGraph& graph, const std::filesystem::path& path);
SceneGraph load_graph(const std::filesystem::path& path);

}  // namespace vsg
