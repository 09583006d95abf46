#pragma once

#include <filesystem>
#include <iosfwd>

#include "vsg/types.hpp"

namespace vsg {

enum class PlyEncoding { kAscii, kBinaryLittleEndian };

/// Reads x,y,z (+ optional red,green,blue) vertices and optional polygon faces.
/// Polygons with more than three corners are fan-triangulated. Throws ParseError
/// with a line (ascii/header) or byte offset (binary) location.
SceneMesh read_ply(std::istream& in);
SceneMesh read_ply(const std::filesystem::path& path);

void write_ply(std::ostream& out, const SceneMesh& mesh, PlyEncoding encoding);
void write_ply(const std::filesystem::path& path, const SceneMesh& mesh, PlyEncoding encoding);

}  // namespace vsg
