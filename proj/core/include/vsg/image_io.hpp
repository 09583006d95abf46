#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vsg/render.hpp"

namespace vsg {

RasterImage read_png(const std::filesystem::path& path);
void write_png(const RasterImage& image, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const RasterImage& image);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);

}  // namespace vsg
