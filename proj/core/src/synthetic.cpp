#include "vsg/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

#include "vsg/errors.hpp"
#include "vsg/image_io.hpp"
#include "vsg/ply.hpp"

namespace vsg::synthetic {
namespace {

constexpr double kPi = std::numbers::pi;

Part box(double x0, double y0, double z0, double x1, double y1, double z1, Rgb color) {
  return {Vec3(x0, y0, z0), Vec3(x1, y1, z1), color};
}

// Four square legs under a rectangular top.
void add_legs(std::vector<Part>& parts, double hx, double hy, double height, double t, Rgb color) {
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      const double cx = sx * (hx - t), cy = sy * (hy - t);
      parts.push_back(box(cx - t / 2, cy - t / 2, 0.0, cx + t / 2, cy + t / 2, height, color));
    }
  }
}

const std::map<std::string, std::vector<Part>>& templates() {
  static const std::map<std::string, std::vector<Part>> table = [] {
    std::map<std::string, std::vector<Part>> t;
    const Rgb wood{139, 90, 43}, light_wood{205, 170, 125}, red{200, 30, 30}, dark_red{110, 20, 20};
    const Rgb black{20, 20, 20}, gray{128, 128, 128}, blue{40, 70, 200}, navy{20, 30, 90};
    const Rgb yellow{240, 220, 60}, green{40, 150, 60}, white{235, 235, 235};

    auto& tbl = t["table"];
    tbl.push_back(box(-0.40, -0.60, 0.70, 0.40, 0.60, 0.75, wood));
    tbl.push_back(box(0.36, -0.55, 0.60, 0.40, 0.55, 0.70, light_wood));
    add_legs(tbl, 0.40, 0.60, 0.70, 0.05, wood);

    auto& chair = t["chair"];
    chair.push_back(box(-0.22, -0.22, 0.42, 0.22, 0.22, 0.47, red));
    chair.push_back(box(-0.25, -0.22, 0.47, -0.20, 0.22, 0.95, dark_red));
    add_legs(chair, 0.22, 0.22, 0.42, 0.04, black);

    auto& monitor = t["monitor"];
    monitor.push_back(box(-0.12, -0.12, 0.00, 0.12, 0.12, 0.02, gray));
    monitor.push_back(box(-0.05, -0.03, 0.02, -0.01, 0.03, 0.12, gray));
    monitor.push_back(box(-0.02, -0.30, 0.10, 0.01, 0.30, 0.45, gray));
    monitor.push_back(box(0.01, -0.28, 0.12, 0.02, 0.28, 0.43, black));

    auto& sofa = t["sofa"];
    sofa.push_back(box(-0.45, -1.00, 0.00, 0.45, 1.00, 0.45, blue));
    sofa.push_back(box(-0.45, -1.00, 0.45, -0.25, 1.00, 0.90, navy));
    sofa.push_back(box(-0.25, -1.00, 0.45, 0.45, -0.85, 0.65, navy));
    sofa.push_back(box(-0.25, 0.85, 0.45, 0.45, 1.00, 0.65, navy));

    auto& cabinet = t["cabinet"];
    cabinet.push_back(box(-0.25, -0.45, 0.00, 0.25, 0.45, 1.20, wood));
    cabinet.push_back(box(0.25, -0.42, 0.05, 0.27, -0.01, 1.15, light_wood));
    cabinet.push_back(box(0.25, 0.01, 0.05, 0.27, 0.42, 1.15, light_wood));

    auto& lamp = t["lamp"];
    lamp.push_back(box(-0.15, -0.15, 0.00, 0.15, 0.15, 0.03, black));
    lamp.push_back(box(-0.02, -0.02, 0.03, 0.02, 0.02, 1.40, black));
    lamp.push_back(box(-0.20, -0.20, 1.40, 0.20, 0.20, 1.65, yellow));
    lamp.push_back(box(0.02, -0.08, 1.00, 0.06, 0.08, 1.04, gray));

    auto& bin = t["bin"];
    bin.push_back(box(-0.15, -0.15, 0.00, 0.15, 0.15, 0.40, green));
    bin.push_back(box(0.15, -0.08, 0.25, 0.17, 0.08, 0.33, white));

    auto& bed = t["bed"];
    bed.push_back(box(-1.00, -0.75, 0.00, 1.00, 0.75, 0.45, white));
    bed.push_back(box(-1.10, -0.75, 0.00, -1.00, 0.75, 1.00, wood));
    bed.push_back(box(-0.95, -0.60, 0.45, -0.65, 0.60, 0.55, blue));

    auto& shelf = t["bookshelf"];
    shelf.push_back(box(-0.18, -0.45, 0.00, 0.18, 0.45, 1.80, wood));
    for (double z : {0.35, 0.80, 1.25}) shelf.push_back(box(0.18, -0.40, z, 0.20, 0.40, z + 0.30, red));
    return t;
  }();
  return table;
}

Vec3 to_world(const Placement& p, const Vec3& local) {
  const double c = std::cos(p.yaw), s = std::sin(p.yaw);
  return {p.position.x() + c * local.x() - s * local.y(), p.position.y() + s * local.x() + c * local.y(),
          p.position.z() + local.z()};
}

void append_box(SceneMesh& mesh, std::vector<std::uint32_t>& indices, const Placement& placement,
                const Part& part) {
  const auto base = static_cast<std::uint32_t>(mesh.positions.size());
  for (int k = 0; k < 8; ++k) {
    const Vec3 local((k & 1) ? part.max.x() : part.min.x(), (k & 2) ? part.max.y() : part.min.y(),
                     (k & 4) ? part.max.z() : part.min.z());
    mesh.positions.push_back(to_world(placement, local));
    mesh.colors.push_back(part.color);
    indices.push_back(base + k);
  }
  static constexpr std::array<std::array<std::uint32_t, 4>, 6> kQuads{{
      {0, 2, 3, 1},  // bottom
      {4, 5, 7, 6},  // top
      {0, 1, 5, 4},  // -y
      {2, 6, 7, 3},  // +y
      {0, 4, 6, 2},  // -x
      {1, 3, 7, 5},  // +x
  }};
  for (const auto& q : kQuads) {
    mesh.faces.push_back({base + q[0], base + q[1], base + q[2]});
    mesh.faces.push_back({base + q[0], base + q[2], base + q[3]});
  }
}

double lattice_yaw(int k) { return static_cast<double>(k % 12) * kPi / 6.0; }

}  // namespace

std::vector<Part> class_template(const std::string& label) {
  auto it = templates().find(label);
  if (it == templates().end()) throw InvalidArgument("no synthetic template for '" + label + "'");
  return it->second;
}

std::vector<std::string> template_labels() {
  std::vector<std::string> labels;
  for (const auto& [label, parts] : templates()) labels.push_back(label);
  return labels;
}

LoadedScene build_scene(const Layout& layout) {
  SceneMesh mesh;
  std::vector<std::vector<std::uint32_t>> members;
  for (const auto& placement : layout.placements) {
    const auto parts = placement.parts.empty() ? class_template(placement.label) : placement.parts;
    auto& indices = members.emplace_back();
    for (const auto& part : parts) append_box(mesh, indices, placement, part);
  }
  mesh.scene_center = SceneMesh::mean_center(mesh.positions);

  LoadedScene scene;
  scene.name = layout.name;
  for (std::size_t i = 0; i < layout.placements.size(); ++i) {
    const auto& p = layout.placements[i];
    auto instance = make_instance(mesh, p.id, p.label, members[i]);
    instance.front = Vec3(std::cos(p.yaw), std::sin(p.yaw), 0.0);
    scene.instances.push_back(std::move(instance));
  }
  scene.mesh = std::move(mesh);
  return scene;
}

Layout room_layout() {
  Layout layout{"synthetic_room", {}};
  auto add = [&](const std::string& label, double yaw_deg, Vec3 position) {
    Placement p;
    p.id = static_cast<int>(layout.placements.size()) + 1;
    p.label = label;
    p.yaw = yaw_deg * kPi / 180.0;
    p.position = position;
    layout.placements.push_back(std::move(p));
  };
  add("table", 0.0, {0.0, 0.0, 0.0});
  add("chair", 180.0, {0.75, 0.60, 0.0});
  add("chair", 180.0, {0.75, -0.60, 0.0});
  add("monitor", 0.0, {-0.15, 0.0, 0.75});
  add("sofa", 0.0, {-2.3, 0.0, 0.0});
  add("cabinet", 270.0, {1.8, 2.2, 0.0});
  add("lamp", 0.0, {-2.4, 1.7, 0.0});
  add("bin", 90.0, {1.6, -2.1, 0.0});
  return layout;
}

Layout random_box_layout(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> size(0.2, 1.2);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> height(0.0, 1.5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  std::uniform_int_distribution<int> channel(0, 255);
  std::bernoulli_distribution raised(0.3);

  Layout layout{"random_boxes", {}};
  for (int i = 0; i < count; ++i) {
    Placement p;
    p.id = i + 1;
    p.label = "box";
    p.yaw = angle(rng);
    p.position = {coord(rng), coord(rng), raised(rng) ? height(rng) : 0.0};
    const double hx = size(rng) / 2, hy = size(rng) / 2, h = size(rng);
    const Rgb body{static_cast<std::uint8_t>(channel(rng)), static_cast<std::uint8_t>(channel(rng)),
                   static_cast<std::uint8_t>(channel(rng))};
    p.parts.push_back(box(-hx, -hy, 0.0, hx, hy, h, body));
    p.parts.push_back(box(hx, -hy / 2, h / 4, hx + 0.02, hy / 2, 3 * h / 4, {255, 0, 255}));
    layout.placements.push_back(std::move(p));
  }
  return layout;
}

Layout grid_layout(int count) {
  if (count < 0) throw InvalidArgument("object count must be non-negative");
  const auto labels = template_labels();
  const int columns = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count)))));
  Layout layout{"grid_" + std::to_string(count), {}};
  for (int i = 0; i < count; ++i) {
    Placement p;
    p.id = i + 1;
    p.label = labels[static_cast<std::size_t>(i) % labels.size()];
    p.yaw = lattice_yaw(i * 5);
    p.position = {3.0 * (i % columns), 3.0 * (i / columns), 0.0};
    layout.placements.push_back(std::move(p));
  }
  return layout;
}

RasterImage reference_image(const std::string& label, const RigConfig& rig, const RenderOptions& render) {
  Layout single{label, {}};
  Placement p;
  p.id = 1;
  p.label = label;
  single.placements.push_back(std::move(p));
  const auto scene = build_scene(single);
  const auto& object = scene.instances.front();
  const auto poses = rig_positions(object.centroid, rig_radius(object.aabb, rig), rig.num_views);
  // The last rig pose sits at azimuth 2*pi, on the +X (front) axis.
  return render_view(isolate_object(scene.mesh, object), poses.back(), render);
}

void write_bundle(const Layout& layout, const std::filesystem::path& directory) {
  const auto scene = build_scene(layout);
  std::filesystem::create_directories(directory / "references");
  write_ply(directory / "scene.ply", scene.mesh, PlyEncoding::kAscii);

  Segmentation seg;
  for (const auto& instance : scene.instances) {
    seg.records.push_back({instance.id, instance.class_label, instance.vertex_indices});
  }
  std::ofstream(directory / "segments.json") << to_json(seg).dump(2) << "\n";

  nlohmann::json manifest = nlohmann::json::object();
  for (const auto& placement : layout.placements) {
    if (manifest.contains(placement.label) || !placement.parts.empty()) continue;
    const auto file = placement.label + ".png";
    write_png(reference_image(placement.label), directory / "references" / file);
    manifest[placement.label] = file;
  }
  std::ofstream(directory / "references" / "manifest.json") << manifest.dump(2) << "\n";
}

}  // namespace vsg::synthetic
