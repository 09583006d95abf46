#include "vsg/ply.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <sstream>

#include "vsg/errors.hpp"

namespace vsg {
namespace {

enum class Scalar { kI8, kU8, kI16, kU16, kI32, kU32, kF32, kF64 };

std::optional<Scalar> scalar_from(const std::string& name) {
  if (name == "char" || name == "int8") return Scalar::kI8;
  if (name == "uchar" || name == "uint8") return Scalar::kU8;
  if (name == "short" || name == "int16") return Scalar::kI16;
  if (name == "ushort" || name == "uint16") return Scalar::kU16;
  if (name == "int" || name == "int32") return Scalar::kI32;
  if (name == "uint" || name == "uint32") return Scalar::kU32;
  if (name == "float" || name == "float32") return Scalar::kF32;
  if (name == "double" || name == "float64") return Scalar::kF64;
  return std::nullopt;
}

std::size_t scalar_size(Scalar s) {
  switch (s) {
    case Scalar::kI8:
    case Scalar::kU8: return 1;
    case Scalar::kI16:
    case Scalar::kU16: return 2;
    case Scalar::kI32:
    case Scalar::kU32:
    case Scalar::kF32: return 4;
    case Scalar::kF64: return 8;
  }
  return 0;
}

bool is_float(Scalar s) { return s == Scalar::kF32 || s == Scalar::kF64; }

struct Property {
  std::string name;
  Scalar type = Scalar::kF32;
  bool is_list = false;
  Scalar count_type = Scalar::kU8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  PlyEncoding encoding = PlyEncoding::kAscii;
  std::vector<Element> elements;
  std::size_t body_offset = 0;
  std::size_t body_line = 0;
};

std::string line_loc(std::size_t line) { return "line " + std::to_string(line); }

Header parse_header(const std::string& data) {
  Header header;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_format = false;
  auto next_line = [&]() -> std::optional<std::string> {
    if (pos >= data.size()) return std::nullopt;
    auto end = data.find('\n', pos);
    if (end == std::string::npos) end = data.size();
    std::string line = data.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = end + 1;
    ++line_no;
    return line;
  };

  auto first = next_line();
  if (!first || *first != "ply") throw ParseError("missing 'ply' magic", line_loc(1));

  while (true) {
    auto line = next_line();
    if (!line) throw ParseError("header ended without end_header", line_loc(line_no));
    std::istringstream in(*line);
    std::string keyword;
    in >> keyword;
    if (keyword.empty() || keyword == "comment" || keyword == "obj_info") continue;
    if (keyword == "end_header") break;
    if (keyword == "format") {
      std::string fmt, version;
      in >> fmt >> version;
      if (fmt == "ascii") {
        header.encoding = PlyEncoding::kAscii;
      } else if (fmt == "binary_little_endian") {
        header.encoding = PlyEncoding::kBinaryLittleEndian;
      } else {
        throw ParseError("unsupported PLY format '" + fmt + "'", line_loc(line_no));
      }
      saw_format = true;
    } else if (keyword == "element") {
      Element e;
      long long count = -1;
      in >> e.name >> count;
      if (e.name.empty() || count < 0) throw ParseError("malformed element line", line_loc(line_no));
      e.count = static_cast<std::size_t>(count);
      header.elements.push_back(std::move(e));
    } else if (keyword == "property") {
      if (header.elements.empty()) throw ParseError("property before any element", line_loc(line_no));
      Property p;
      std::string type;
      in >> type;
      if (type == "list") {
        std::string count_type, item_type;
        in >> count_type >> item_type >> p.name;
        auto ct = scalar_from(count_type);
        auto it = scalar_from(item_type);
        if (!ct || !it || is_float(*ct) || p.name.empty()) {
          throw ParseError("malformed list property", line_loc(line_no));
        }
        p.is_list = true;
        p.count_type = *ct;
        p.type = *it;
      } else {
        auto st = scalar_from(type);
        in >> p.name;
        if (!st || p.name.empty()) throw ParseError("unknown property type '" + type + "'", line_loc(line_no));
        p.type = *st;
      }
      header.elements.back().properties.push_back(std::move(p));
    } else {
      throw ParseError("unexpected header keyword '" + keyword + "'", line_loc(line_no));
    }
  }
  if (!saw_format) throw ParseError("missing format line", line_loc(line_no));
  header.body_offset = pos;
  header.body_line = line_no + 1;
  return header;
}

// Pulls scalar values from either body encoding.
class BodyReader {
 public:
  BodyReader(const std::string& data, const Header& header)
      : data_(data), pos_(header.body_offset), line_(header.body_line), encoding_(header.encoding) {}

  void begin_record() {
    if (encoding_ == PlyEncoding::kBinaryLittleEndian) return;
    // Skip blank lines; each element record occupies one line.
    while (true) {
      if (pos_ >= data_.size()) throw ParseError("unexpected end of data", line_loc(line_));
      auto end = data_.find('\n', pos_);
      if (end == std::string::npos) end = data_.size();
      std::string_view line(data_.data() + pos_, end - pos_);
      pos_ = end + 1;
      const auto this_line = line_++;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      tokens_.clear();
      token_index_ = 0;
      record_line_ = this_line;
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) tokens_.emplace_back(line.substr(i, j - i));
        i = j;
      }
      return;
    }
  }

  void end_record() {
    if (encoding_ == PlyEncoding::kAscii && token_index_ != tokens_.size()) {
      throw ParseError("extra values on record", line_loc(record_line_));
    }
  }

  double read(Scalar type) {
    return encoding_ == PlyEncoding::kAscii ? read_ascii(type) : read_binary(type);
  }

  std::string location() const {
    return encoding_ == PlyEncoding::kAscii ? line_loc(record_line_) : "byte " + std::to_string(pos_);
  }

 private:
  double read_ascii(Scalar type) {
    if (token_index_ >= tokens_.size()) throw ParseError("too few values on record", line_loc(record_line_));
    const auto token = tokens_[token_index_++];
    double value = 0.0;
    const auto* b = token.data();
    const auto* e = token.data() + token.size();
    if (is_float(type)) {
      auto [p, ec] = std::from_chars(b, e, value);
      if (ec != std::errc() || p != e) throw ParseError("bad number '" + std::string(token) + "'", line_loc(record_line_));
    } else {
      long long v = 0;
      auto [p, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || p != e) throw ParseError("bad integer '" + std::string(token) + "'", line_loc(record_line_));
      value = static_cast<double>(v);
    }
    return value;
  }

  template <typename T>
  T load() {
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
      auto* bytes = reinterpret_cast<unsigned char*>(&v);
      std::reverse(bytes, bytes + sizeof(T));
    }
    pos_ += sizeof(T);
    return v;
  }

  double read_binary(Scalar type) {
    if (pos_ + scalar_size(type) > data_.size()) {
      throw ParseError("unexpected end of binary data", "byte " + std::to_string(pos_));
    }
    switch (type) {
      case Scalar::kI8: return load<std::int8_t>();
      case Scalar::kU8: return load<std::uint8_t>();
      case Scalar::kI16: return load<std::int16_t>();
      case Scalar::kU16: return load<std::uint16_t>();
      case Scalar::kI32: return load<std::int32_t>();
      case Scalar::kU32: return load<std::uint32_t>();
      case Scalar::kF32: return load<float>();
      case Scalar::kF64: return load<double>();
    }
    return 0.0;
  }

  const std::string& data_;
  std::size_t pos_;
  std::size_t line_;
  std::size_t record_line_ = 0;
  PlyEncoding encoding_;
  std::vector<std::string_view> tokens_;
  std::size_t token_index_ = 0;
};

std::uint8_t to_channel(double v, Scalar type) {
  if (is_float(type)) v = v <= 1.0 ? v * 255.0 : v;
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

SceneMesh parse_ply(const std::string& data) {
  const Header header = parse_header(data);
  BodyReader body(data, header);
  SceneMesh mesh;
  bool saw_vertex = false;

  for (const auto& element : header.elements) {
    if (element.name == "vertex") {
      saw_vertex = true;
      int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1;
      for (int k = 0; k < static_cast<int>(element.properties.size()); ++k) {
        const auto& name = element.properties[k].name;
        if (name == "x") ix = k;
        else if (name == "y") iy = k;
        else if (name == "z") iz = k;
        else if (name == "red" || name == "r") ir = k;
        else if (name == "green" || name == "g") ig = k;
        else if (name == "blue" || name == "b") ib = k;
      }
      if (ix < 0 || iy < 0 || iz < 0) throw ParseError("vertex element lacks x, y or z", "header");
      mesh.positions.reserve(element.count);
      mesh.colors.reserve(element.count);
      std::vector<double> values(element.properties.size());
      for (std::size_t v = 0; v < element.count; ++v) {
        body.begin_record();
        for (std::size_t k = 0; k < element.properties.size(); ++k) {
          const auto& prop = element.properties[k];
          if (prop.is_list) {
            const auto n = static_cast<std::size_t>(body.read(prop.count_type));
            for (std::size_t i = 0; i < n; ++i) body.read(prop.type);
          } else {
            values[k] = body.read(prop.type);
          }
        }
        body.end_record();
        mesh.positions.emplace_back(values[ix], values[iy], values[iz]);
        if (ir >= 0 && ig >= 0 && ib >= 0) {
          mesh.colors.push_back({to_channel(values[ir], element.properties[ir].type),
                                 to_channel(values[ig], element.properties[ig].type),
                                 to_channel(values[ib], element.properties[ib].type)});
        } else {
          mesh.colors.push_back({200, 200, 200});
        }
      }
    } else if (element.name == "face") {
      for (std::size_t f = 0; f < element.count; ++f) {
        body.begin_record();
        std::vector<std::uint32_t> corners;
        bool have_indices = false;
        for (const auto& prop : element.properties) {
          if (prop.is_list) {
            const auto where = body.location();
            const double n_raw = body.read(prop.count_type);
            if (n_raw < 0) throw ParseError("negative list length", where);
            const auto n = static_cast<std::size_t>(n_raw);
            const bool wanted = !have_indices && (prop.name == "vertex_indices" || prop.name == "vertex_index");
            for (std::size_t i = 0; i < n; ++i) {
              const double idx = body.read(prop.type);
              if (wanted) {
                if (idx < 0) throw ParseError("negative vertex index", where);
                corners.push_back(static_cast<std::uint32_t>(idx));
              }
            }
            have_indices = have_indices || wanted;
          } else {
            body.read(prop.type);
          }
        }
        body.end_record();
        for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
          mesh.faces.push_back({corners[0], corners[i], corners[i + 1]});
        }
      }
    } else {
      for (std::size_t r = 0; r < element.count; ++r) {
        body.begin_record();
        for (const auto& prop : element.properties) {
          if (prop.is_list) {
            const auto n = static_cast<std::size_t>(body.read(prop.count_type));
            for (std::size_t i = 0; i < n; ++i) body.read(prop.type);
          } else {
            body.read(prop.type);
          }
        }
        body.end_record();
      }
    }
  }
  if (!saw_vertex) throw ParseError("no vertex element", "header");
  mesh.scene_center = SceneMesh::mean_center(mesh.positions);
  return mesh;
}

template <typename T>
void put(std::ostream& out, T v) {
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    auto* bytes = reinterpret_cast<unsigned char*>(&v);
    std::reverse(bytes, bytes + sizeof(T));
  }
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

SceneMesh read_ply(std::istream& in) {
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_ply(data);
}

SceneMesh read_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mesh", path.string());
  return read_ply(in);
}

void write_ply(std::ostream& out, const SceneMesh& mesh, PlyEncoding encoding) {
  out << "ply\n"
      << (encoding == PlyEncoding::kAscii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n")
      << "element vertex " << mesh.positions.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "element face " << mesh.faces.size() << "\n"
      << "property list uchar int vertex_indices\n"
      << "end_header\n";
  auto color = [&](std::size_t i) { return i < mesh.colors.size() ? mesh.colors[i] : Rgb{200, 200, 200}; };
  if (encoding == PlyEncoding::kAscii) {
    out << std::setprecision(17);
    for (std::size_t i = 0; i < mesh.positions.size(); ++i) {
      const auto& p = mesh.positions[i];
      const auto c = color(i);
      out << p.x() << ' ' << p.y() << ' ' << p.z() << ' ' << int(c.r) << ' ' << int(c.g) << ' '
          << int(c.b) << '\n';
    }
    for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  } else {
    for (std::size_t i = 0; i < mesh.positions.size(); ++i) {
      const auto& p = mesh.positions[i];
      const auto c = color(i);
      put(out, p.x());
      put(out, p.y());
      put(out, p.z());
      put(out, c.r);
      put(out, c.g);
      put(out, c.b);
    }
    for (const auto& f : mesh.faces) {
      put(out, std::uint8_t{3});
      for (auto i : f) put(out, static_cast<std::int32_t>(i));
    }
  }
}

void write_ply(const std::filesystem::path& path, const SceneMesh& mesh, PlyEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write mesh", path.string());
  write_ply(out, mesh, encoding);
}

}  // namespace vsg
