#include <fstream>
#include <sstream>

#include "doctest.h"

#include "cli.hpp"
#include "support.hpp"
#include "vsg/config.hpp"
#include "vsg/errors.hpp"
#include "vsg/evaluation.hpp"
#include "vsg/graph_io.hpp"
#include "vsg/offline_clients.hpp"
#include "vsg/pipeline.hpp"
#include "vsg/synthetic.hpp"
#include "vsg/validation.hpp"

using namespace vsg;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

PipelineConfig offline_config() {
  PipelineConfig c;
  c.client.offline = true;
  c.record_timings = false;
  c.reference_db = (testing::data_dir() / "synthetic" / "references").string();
  return c;
}

ScenePaths synthetic_paths() {
  const auto dir = testing::data_dir() / "synthetic";
  return {dir / "scene.ply", dir / "segments.json"};
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

/// Node an exact caption-overlap matcher would pick; first node on ties.
int overlap_oracle(const SceneGraph& g, const std::string& query) {
  const auto q = content_tokens(query);
  int best = g.nodes.front().id;
  std::size_t best_score = 0;
  bool first = true;
  for (const auto& node : g.nodes) {
    std::size_t score = 0;
    for (const auto& t : content_tokens(node.attributes.caption)) score += q.count(t);
    if (first || score > best_score) {
      best = node.id;
      best_score = score;
      first = false;
    }
  }
  return best;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "vsg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  return code;
}

class BrokenVision final : public VisionModel {
 public:
  FrontViewJudgment identify_front_view(const RasterImage*, std::span<const RasterImage>,
                                        std::string_view) override {
    throw ServiceError(ServiceError::Kind::kHttpStatus, "upstream 503");
  }
  ViewAttributes extract_view_attributes(const RasterImage&, std::string_view) override { return {}; }
};

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("offline build reproduces the golden graph") {
  const auto golden = slurp(testing::data_dir() / "synthetic" / "graph.golden.json");
  const auto clients = make_clients(offline_config().client);
  for (int run = 0; run < 2; ++run) {
    const auto graph = run_pipeline(offline_config(), synthetic_paths(), clients);
    CHECK(dump_graph(graph) == golden);
  }
}

TEST_CASE("single worker and pooled builds agree") {
  auto a = offline_config();
  a.workers = 1;
  auto b = offline_config();
  b.workers = 4;
  const auto clients = make_clients(a.client);
  CHECK(dump_graph(run_pipeline(a, synthetic_paths(), clients)) ==
        dump_graph(run_pipeline(b, synthetic_paths(), clients)));
}

TEST_CASE("built graphs are valid and dense") {
  const auto graph = run_pipeline(offline_config(), synthetic_paths(), make_clients(offline_config().client));
  CHECK(graph.nodes.size() == 8);
  CHECK(validate_graph(graph, {true}).empty());
  for (const auto& node : graph.nodes) CHECK_FALSE(node.attributes.caption.empty());
}

TEST_CASE("missing inputs are reported as io errors") {
  auto paths = synthetic_paths();
  paths.segmentation = paths.segmentation.parent_path() / "absent.json";
  CHECK_THROWS_AS(run_pipeline(offline_config(), paths, make_clients(offline_config().client)), IoError);
}

TEST_CASE("invalid scenes are refused before any model call") {
  auto scene = synthetic::build_scene(synthetic::grid_layout(2));
  scene.instances[1].vertex_indices.push_back(1u << 30);
  CHECK_THROWS_AS(build_graph(offline_config(), scene, make_clients(offline_config().client)), ValidationError);
}

TEST_CASE("keep-going skips degenerate objects") {
  auto scene = synthetic::build_scene(synthetic::grid_layout(3));
  const auto base = static_cast<std::uint32_t>(scene.mesh.positions.size());
  scene.mesh.positions.emplace_back(9, 9, 1);
  scene.mesh.positions.emplace_back(9, 9, 1);
  scene.mesh.colors.resize(scene.mesh.positions.size());
  scene.instances.push_back(make_instance(scene.mesh, 40, "speck", {base, base + 1}));

  auto config = offline_config();
  config.reference_db.clear();
  const auto clients = make_clients(config.client);
  try {
    build_graph(config, scene, clients);
    FAIL("expected a pipeline error");
  } catch (const PipelineError& e) {
    CHECK(e.object_id() == 40);
    CHECK(e.stage() == "front estimation");
    CHECK_FALSE(e.service_failure());
  }

  config.keep_going = true;
  std::vector<std::string> warnings;
  const auto graph = build_graph(config, scene, clients, [&](const std::string& w) { warnings.push_back(w); });
  CHECK(graph.nodes.size() == 3);
  CHECK(graph.edges.size() == 6);
  CHECK(graph.metadata["skipped_objects"][0]["id"] == 40);
  bool mentioned = false;
  for (const auto& w : warnings) mentioned = mentioned || w.find("40") != std::string::npos;
  CHECK(mentioned);
}

TEST_CASE("service failures are marked as such") {
  const auto scene = synthetic::build_scene(synthetic::grid_layout(2));
  auto clients = make_clients(offline_config().client);
  clients.vision = std::make_shared<BrokenVision>();
  try {
    build_graph(offline_config(), scene, clients);
    FAIL("expected a pipeline error");
  } catch (const PipelineError& e) {
    CHECK(e.service_failure());
  }
}

TEST_CASE("timings are recorded only when asked") {
  auto config = offline_config();
  config.record_timings = true;
  const auto graph = build_graph(config, synthetic::build_scene(synthetic::grid_layout(2)),
                                 make_clients(config.client));
  CHECK(graph.metadata.contains("created_at"));
  CHECK(graph.metadata["timings"].contains("edges_ms"));
}

TEST_CASE("evaluation agrees with the caption-overlap oracle") {
  const auto graph = load_graph(testing::data_dir() / "synthetic" / "graph.golden.json");
  const auto queries = read_queries(testing::data_dir() / "synthetic" / "queries.jsonl");
  REQUIRE(queries.size() == 8);
  std::size_t expected = 0;
  for (const auto& q : queries) expected += overlap_oracle(graph, q.query) == q.target_id;

  HashingEmbeddingModel embed;
  OfflineTextModel text;
  const auto report = eval_grounding(graph, queries, {}, embed, text);
  CHECK(report.total == 8);
  CHECK(report.correct == expected);
  REQUIRE(report.accuracy());
  CHECK(*report.accuracy() == doctest::Approx(static_cast<double>(expected) / 8.0));
  for (const auto& v : report.verdicts) CHECK(v.predicted_id == overlap_oracle(graph, v.query.query));

  CHECK_FALSE(eval_grounding(graph, {}, {}, embed, text).accuracy());
  CHECK(eval_grounding(graph, {}, {}, embed, text).to_json()["accuracy"] == "n/a");

  auto shifted = queries;
  std::size_t correct_left = expected;
  for (auto& q : shifted) {
    if (overlap_oracle(graph, q.query) == q.target_id) {
      q.target_id = q.target_id == 1 ? 2 : 1;
      --correct_left;
      break;
    }
  }
  CHECK(eval_grounding(graph, shifted, {}, embed, text).correct == correct_left);
}

TEST_CASE("query files report the failing line") {
  std::istringstream ok("{\"query\": \"a\", \"target_id\": 1}\n\n{\"query\": \"b\", \"target_id\": 2, \"category\": \"x\"}\n");
  CHECK(parse_queries(ok).size() == 2);
  std::istringstream bad("{\"query\": \"a\", \"target_id\": 1}\n{\"query\": 3}\n");
  try {
    parse_queries(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.location() == "line 2");
  }
}

TEST_CASE("command line exit codes") {
  const auto dir = testing::data_dir() / "synthetic";
  testing::TempDir tmp("cli");
  const auto out = (tmp / "graph.json").string();
  CHECK(run_cli({"--offline", "build", "--scene", (dir / "scene.ply").string(), "--segments",
                 (dir / "segments.json").string(), "--references", (dir / "references").string(), "--out", out}) ==
        cli::kOk);
  CHECK(slurp(out) == slurp(dir / "graph.golden.json"));

  std::string text;
  CHECK(run_cli({"--offline", "eval", "--graph", out, "--queries", (dir / "queries.jsonl").string()}, &text) ==
        cli::kOk);
  CHECK(text.find("accuracy: 0.875 (7/8)") != std::string::npos);
  CHECK(run_cli({"--offline", "ground", "--graph", out, "--query", "the blue sofa"}, &text) == cli::kOk);
  CHECK(nlohmann::json::parse(text)["object_id"] == 5);
  CHECK(run_cli({"validate", "--graph", out}, &text) == cli::kOk);
  CHECK(run_cli({"--offline", "render-views", "--scene", (dir / "scene.ply").string(), "--segments",
                 (dir / "segments.json").string(), "--object", "2", "--out-dir", (tmp / "views").string()}) ==
        cli::kOk);
  CHECK(std::filesystem::exists(tmp / "views"));

  CHECK(run_cli({}) == cli::kUsage);
  CHECK(run_cli({"frobnicate"}) == cli::kUsage);
  CHECK(run_cli({"ground", "--graph", out}) == cli::kUsage);
  CHECK(run_cli({"--offline", "build", "--scene", "/nonexistent.ply", "--segments", "/nonexistent.json", "--out",
                 out}) == cli::kDataError);
  std::ofstream(tmp / "broken.json") << "{\"nodes\": []}";
  CHECK(run_cli({"validate", "--graph", (tmp / "broken.json").string()}) == cli::kDataError);
}

}
