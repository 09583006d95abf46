// One line per acceptance criterion; exits non-zero when any fails.
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"
#include "vsg/config.hpp"
#include "vsg/errors.hpp"
#include "vsg/evaluation.hpp"
#include "vsg/graph_io.hpp"
#include "vsg/image_io.hpp"
#include "vsg/offline_clients.hpp"
#include "vsg/pipeline.hpp"
#include "vsg/relations.hpp"
#include "vsg/render.hpp"
#include "vsg/synthetic.hpp"
#include "vsg/validation.hpp"

using namespace vsg;
using testing::kPi;

namespace {

struct Failure {
  std::string what;
};

// Extra detail printed after a passing criterion.
std::string g_note;

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void rig_geometry() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> coord(-10, 10), radius(0.1, 25);
  for (int n : {4, 8, 12, 16, 20}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Vec3 c(coord(rng), coord(rng), coord(rng));
      const double r = radius(rng);
      const auto poses = rig_positions(c, r, n);
      expect(poses.size() == static_cast<std::size_t>(n), "pose count");
      for (int i = 0; i < n; ++i) {
        const auto& p = poses[static_cast<std::size_t>(i)].position;
        expect(std::abs((p - c).norm() - r) <= 1e-9, "radius off by " + fmt((p - c).norm() - r));
        expect(std::abs(p.z() - c.z()) <= 1e-9, "pose not planar");
        const auto& q = poses[static_cast<std::size_t>((i + 1) % n)].position;
        const double gap = testing::angle_between(p - c, q - c);
        expect(std::abs(gap - 2 * kPi / n) <= 1e-9, "gap " + fmt(gap) + " for N=" + std::to_string(n));
      }
    }
  }
  expect(RigConfig{}.num_views == 12, "default view count");
  expect(PipelineConfig{}.front.rig.num_views == 12, "pipeline default view count");
}

void front_closed_forms() {
  const Vec3 rel = relative_vector({3, 4, 0}, Vec3::Zero());
  expect(rel == Vec3(3, 4, 0), "relative vector");
  const Vec3 f = front_direction({3, 4, 0}, Vec3::Zero());
  expect((f - Vec3(0.6, 0.8, 0)).norm() <= 1e-9, "3-4-5 direction");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> coord(-50, 50);
  for (int t = 0; t < 1000; ++t) {
    const Vec3 a(coord(rng), coord(rng), coord(rng)), b(coord(rng), coord(rng), coord(rng));
    expect(std::abs(front_direction(a, b).norm() - 1.0) <= 1e-9, "unit norm");
  }
  for (int n : {4, 12, 20}) {
    const Vec3 c(1, -2, 0.5);
    const auto poses = rig_positions(c, 2.5, n);
    for (int k = 0; k < n; ++k) {
      const double theta = 2 * kPi * (k + 1) / n;
      const Vec3 expected(std::cos(theta), std::sin(theta), 0);
      expect((front_direction(poses[static_cast<std::size_t>(k)].position, c) - expected).norm() <= 1e-9,
             "front of pose " + std::to_string(k));
    }
  }
}

void symmetric_front_rule() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-5, 5);
  std::uniform_int_distribution<int> count(2, 12);
  for (int t = 0; t < 1000; ++t) {
    std::vector<Vec3> candidates;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const double a = coord(rng);
      candidates.emplace_back(std::cos(a), std::sin(a), 0);
    }
    const Vec3 c(coord(rng), coord(rng), 0), s(coord(rng), coord(rng), 0);
    const auto got = disambiguate_front(candidates, c, s);
    const auto want = testing::argmin_angle_oracle(candidates, c, s);
    expect(got == want, "trial " + std::to_string(t) + ": " + std::to_string(got) + " vs " + std::to_string(want));
  }
  const std::vector<Vec3> tied{{0, 1, 0}, {0, -1, 0}, {0, 1, 0}};
  expect(disambiguate_front(tied, Vec3::Zero(), {1, 0, 0}) == 0, "symmetric tie goes to the lowest index");
  expect(disambiguate_front(tied, Vec3::Zero(), {0, 1, 0}) == 0, "duplicate tie goes to the lowest index");
}

LoadedScene moved(const LoadedScene& scene, const RigidZ& t) {
  LoadedScene out = scene;
  for (auto& p : out.mesh.positions) p = t.apply(p);
  out.mesh.scene_center = t.apply(scene.mesh.scene_center);
  for (std::size_t i = 0; i < out.instances.size(); ++i) {
    const auto& src = scene.instances[i];
    out.instances[i] = make_instance(out.mesh, src.id, src.class_label, src.vertex_indices);
    out.instances[i].front = t.rotate(*src.front);
  }
  return out;
}

void viewpoint_invariance() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> count(3, 10);
  std::uniform_real_distribution<double> angle(-kPi, kPi), shift(-50, 50);
  double worst_distance = 0, worst_angle = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto scene = synthetic::build_scene(synthetic::random_box_layout(rng, count(rng)));
    const RigidZ t{angle(rng), Vec3(shift(rng), shift(rng), shift(rng))};
    const auto a = build_edges(scene.instances, scene.mesh, {});
    const auto other = moved(scene, t);
    const auto b = build_edges(other.instances, other.mesh, {});
    expect(a.size() == b.size(), "edge count changed");
    for (std::size_t e = 0; e < a.size(); ++e) {
      expect(a[e].relation == b[e].relation,
             "trial " + std::to_string(trial) + " edge " + std::to_string(e) + ": '" + a[e].relation + "' vs '" +
                 b[e].relation + "'");
      worst_distance = std::max(worst_distance, std::abs(a[e].distance_m - b[e].distance_m));
      double d = std::abs(a[e].angle_deg - b[e].angle_deg);
      worst_angle = std::max(worst_angle, std::min(d, 360.0 - d));
    }
  }
  expect(worst_distance <= 1e-9, "distance drift " + fmt(worst_distance));
  expect(worst_angle <= 1e-6, "angle drift " + fmt(worst_angle));
  g_note = "max distance drift " + fmt(worst_distance) + " m, max angle drift " + fmt(worst_angle) + " deg";
}

void dense_edges() {
  for (int n : {0, 1, 2, 3, 8, 21}) {
    const auto scene = synthetic::build_scene(synthetic::grid_layout(n));
    const auto edges = build_edges(scene.instances, scene.mesh, {});
    expect(edges.size() == static_cast<std::size_t>(n * (n - 1)), "n=" + std::to_string(n));
  }
  const auto scene = synthetic::build_scene(synthetic::grid_layout(21));
  expect(build_edges(scene.instances, scene.mesh, {}).size() == 420, "21 objects give 420 edges");
  const auto graph = load_graph(testing::data_dir() / "synthetic" / "graph.golden.json");
  expect(graph.edges.size() == graph.nodes.size() * (graph.nodes.size() - 1), "bundled graph is dense");
}

void table_and_chairs() {
  synthetic::Layout layout{"fixture", {}};
  layout.placements.push_back({1, "table", 0.0, Vec3(0, 0, 0), {}});
  layout.placements.push_back({2, "chair", 1.25 * kPi, Vec3(1, 1, 0), {}});
  layout.placements.push_back({3, "chair", 0.75 * kPi, Vec3(1, -1, 0), {}});
  const auto scene = synthetic::build_scene(layout);
  const auto edges = build_edges(scene.instances, scene.mesh, {});
  const auto& table = scene.instances[0];
  int checked = 0;
  for (const auto& e : edges) {
    if (e.object_id != 1) continue;
    const auto& chair = scene.instances[static_cast<std::size_t>(e.subject_id - 1)];
    const int side = testing::side_oracle(table.centroid, *table.front, chair.centroid);
    expect((chair.centroid - table.centroid).dot(*table.front) > 0, "chair not ahead of the table");
    const auto sector = e.relation.substr(0, e.relation.find(", "));
    const std::string want = side > 0 ? "in front of and to the left" : "in front of and to the right";
    expect(sector == want, "chair " + std::to_string(e.subject_id) + ": '" + e.relation + "'");
    ++checked;
  }
  expect(checked == 2, "both chairs checked");
}

void pruning() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> nodes(2, 16);
  std::uniform_int_distribution<std::size_t> kdist(1, 300);
  HashingEmbeddingModel model;
  for (int trial = 0; trial < 150; ++trial) {
    const auto g = testing::random_graph(rng, nodes(rng));
    const std::string query = trial % 2 ? "the chair left of the table" : "a lamp near the sofa";
    const auto k = trial % 10 == 0 ? std::size_t{1500} : kdist(rng);
    const auto q = model.embed_text(query);
    std::vector<double> sims;
    for (const auto& t : triplet_strings(g)) {
      const auto v = model.embed_text(t);
      double dot = 0;
      for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * q[i];
      sims.push_back(dot);
    }
    const auto want = testing::prune_oracle(sims, k);
    const auto got = prune_relations(g, query, k, model);
    expect(got.size() == std::min(k, g.edges.size()), "size");
    for (std::size_t i = 0; i < got.size(); ++i) {
      expect(got[i].edge_index == want[i], "trial " + std::to_string(trial) + " rank " + std::to_string(i));
    }
    const auto context = grounding_context(g, got, query);
    expect(context["nodes"].size() == g.nodes.size(), "context lacks nodes");
  }
  expect(GroundingConfig{}.top_k == 1500, "default K");
  expect(PipelineConfig{}.grounding.top_k == 1500, "pipeline default K");
}

std::set<std::string> content_tokens(const std::string& text) {
  std::set<std::string> out;
  std::istringstream in(text);
  std::string word;
  while (in >> word) {
    std::string clean;
    for (char c : word) {
      if (std::isalnum(static_cast<unsigned char>(c))) clean += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (!clean.empty() && clean != "a" && clean != "an" && clean != "the") out.insert(clean);
  }
  return out;
}

void offline_end_to_end() {
  const auto dir = testing::data_dir() / "synthetic";
  PipelineConfig config;
  config.client.offline = true;
  config.record_timings = false;
  config.reference_db = (dir / "references").string();
  const auto clients = make_clients(config.client);
  const auto golden = slurp(dir / "graph.golden.json");
  for (int run = 0; run < 2; ++run) {
    expect(dump_graph(run_pipeline(config, {dir / "scene.ply", dir / "segments.json"}, clients)) == golden,
           "run " + std::to_string(run) + " differs from the golden graph");
  }

  const auto graph = load_graph(dir / "graph.golden.json");
  const auto queries = read_queries(dir / "queries.jsonl");
  std::size_t oracle_correct = 0;
  for (const auto& q : queries) {
    const auto want = content_tokens(q.query);
    int best = 0;
    std::size_t best_score = 0;
    for (const auto& node : graph.nodes) {
      std::size_t score = 0;
      for (const auto& t : content_tokens(node.attributes.caption)) score += want.count(t);
      if (best == 0 || score > best_score) {
        best = node.id;
        best_score = score;
      }
    }
    oracle_correct += best == q.target_id;
  }
  HashingEmbeddingModel embed;
  OfflineTextModel text;
  const auto report = eval_grounding(graph, queries, config.grounding, embed, text);
  expect(report.total == queries.size() && !queries.empty(), "query count");
  expect(report.correct == oracle_correct,
         "accuracy " + std::to_string(report.correct) + "/" + std::to_string(report.total) + " vs oracle " +
             std::to_string(oracle_correct));
}

void renderer() {
  ObjectGeometry point;
  point.positions.push_back({0.3, -0.2, 0.9});
  point.colors.push_back({0, 0, 255});
  for (const auto& pose : rig_positions(point.positions[0], 2.0, 12)) {
    const auto img = render_view(point, pose);
    double sx = 0, sy = 0;
    int n = 0;
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        if (img.at(x, y) == kBackground) continue;
        sx += x + 0.5;
        sy += y + 0.5;
        ++n;
      }
    }
    expect(n > 0, "look-at point not drawn");
    expect(std::abs(sx / n - img.width / 2.0) <= 1.0 && std::abs(sy / n - img.height / 2.0) <= 1.0,
           "look-at point at (" + fmt(sx / n) + ", " + fmt(sy / n) + ")");
  }

  ObjectGeometry cube;
  for (int k = 0; k < 8; ++k) {
    cube.positions.emplace_back((k & 1) ? 0.5 : -0.5, (k & 2) ? 0.5 : -0.5, (k & 4) ? 0.5 : -0.5);
    cube.colors.push_back({180, 60, 60});
  }
  const std::array<std::array<std::uint32_t, 4>, 6> quads{
      {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}}};
  for (const auto& q : quads) {
    cube.faces.push_back({q[0], q[1], q[2]});
    cube.faces.push_back({q[0], q[2], q[3]});
  }
  const auto poses = rig_positions(Vec3::Zero(), rig_radius({Vec3::Constant(-0.5), Vec3::Constant(0.5)}, {}), 12);
  const auto img = render_view(cube, poses[11]);
  expect(encode_png(img) == encode_png(render_view(cube, poses[11])), "render bytes differ between runs");
  int min_x = img.width, max_x = -1, min_y = img.height, max_y = -1;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (img.at(x, y) == kBackground) continue;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
    }
  }
  const double aspect = static_cast<double>(max_x - min_x + 1) / (max_y - min_y + 1);
  expect(std::abs(aspect - 1.0) <= 0.1, "cube aspect " + fmt(aspect));
}

std::string schema_path(const nlohmann::json& doc) {
  try {
    graph_from_json(doc);
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<accepted>";
}

void serialization() {
  const auto path = testing::data_dir() / "synthetic" / "graph.golden.json";
  const auto text = slurp(path);
  const auto doc = nlohmann::json::parse(text);
  const auto graph = graph_from_json(doc);
  expect(graph_to_json(graph) == doc, "golden document changes on round trip");
  expect(dump_graph(graph) == text, "golden text changes on round trip");
  expect(graph_from_json(graph_to_json(graph)) == graph, "graph changes on round trip");

  auto no_edges = doc;
  no_edges.erase("edges");
  expect(schema_path(no_edges) == "/edges", "missing edges reported at " + schema_path(no_edges));
  auto bad_node = doc;
  bad_node["nodes"][3]["id"] = "four";
  expect(schema_path(bad_node) == "/nodes/3/id", "bad id reported at " + schema_path(bad_node));
  auto bad_edge = doc;
  bad_edge["edges"][10].erase("relation");
  expect(schema_path(bad_edge) == "/edges/10/relation", "bad edge reported at " + schema_path(bad_edge));
  auto bad_front = doc;
  bad_front["nodes"][0]["front"] = "north";
  expect(schema_path(bad_front).rfind("/nodes/0/front", 0) == 0, "bad front reported at " + schema_path(bad_front));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria{
      {"rig geometry and default view count", rig_geometry},
      {"front direction closed forms", front_closed_forms},
      {"symmetric front disambiguation", symmetric_front_rule},
      {"viewpoint invariance of relations", viewpoint_invariance},
      {"dense edges", dense_edges},
      {"table and two chairs", table_and_chairs},
      {"relation pruning", pruning},
      {"offline end-to-end", offline_end_to_end},
      {"renderer", renderer},
      {"serialization", serialization},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    std::string detail;
    bool ok = true;
    g_note.clear();
    try {
      check();
    } catch (const Failure& f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    if (ok) detail = g_note;
    std::cout << (ok ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : ": " + detail) << "\n";
    failed += !ok;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
