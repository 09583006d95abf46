#include "vsg/image_io.hpp"

#include <png.h>

#include <openssl/evp.h>

#include <cstring>

#include "vsg/errors.hpp"

namespace vsg {
namespace {

png_image make_header(const RasterImage& image) {
  png_image header;
  std::memset(&header, 0, sizeof header);
  header.version = PNG_IMAGE_VERSION;
  header.width = static_cast<png_uint_32>(image.width);
  header.height = static_cast<png_uint_32>(image.height);
  header.format = PNG_FORMAT_RGB;
  return header;
}

}  // namespace

RasterImage read_png(const std::filesystem::path& path) {
  png_image header;
  std::memset(&header, 0, sizeof header);
  header.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&header, path.string().c_str())) {
    throw IoError(std::string("cannot read PNG (") + header.message + ")", path.string());
  }
  header.format = PNG_FORMAT_RGB;
  RasterImage image;
  image.width = static_cast<int>(header.width);
  image.height = static_cast<int>(header.height);
  image.pixels.resize(PNG_IMAGE_SIZE(header));
  if (!png_image_finish_read(&header, nullptr, image.pixels.data(), 0, nullptr)) {
    png_image_free(&header);
    throw IoError(std::string("cannot decode PNG (") + header.message + ")", path.string());
  }
  return image;
}

void write_png(const RasterImage& image, const std::filesystem::path& path) {
  auto header = make_header(image);
  if (!png_image_write_to_file(&header, path.string().c_str(), 0, image.pixels.data(), 0, nullptr)) {
    throw IoError(std::string("cannot write PNG (") + header.message + ")", path.string());
  }
}

std::vector<std::uint8_t> encode_png(const RasterImage& image) {
  auto header = make_header(image);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&header, nullptr, &size, 0, image.pixels.data(), 0, nullptr)) {
    throw Error(std::string("PNG encoding failed: ") + header.message);
  }
  std::vector<std::uint8_t> bytes(size);
  if (!png_image_write_to_memory(&header, bytes.data(), &size, 0, image.pixels.data(), 0, nullptr)) {
    throw Error(std::string("PNG encoding failed: ") + header.message);
  }
  bytes.resize(size);
  return bytes;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int written = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                      static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(written));
  return out;
}

}  // namespace vsg
