#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "vsg/errors.hpp"
#include "vsg/evaluation.hpp"
#include "vsg/graph_io.hpp"
#include "vsg/grounding.hpp"
#include "vsg/image_io.hpp"
#include "vsg/pipeline.hpp"
#include "vsg/render.hpp"
#include "vsg/validation.hpp"

namespace vsg::cli {
namespace {

struct GlobalOptions {
  std::string config_file;
  bool offline = false;
  std::optional<unsigned> workers;
  std::string replay_dir;
  std::string record_dir;
};

struct BuildOptions {
  std::string scene, segments, out, dump_views, references;
  std::optional<int> views;
  bool no_enrich = false;
  bool keep_going = false;
  bool timings = false;
};

struct GroundOptions {
  std::string graph, query, queries;
  std::optional<std::size_t> k;
};

struct EvalOptions {
  std::string graph, queries, report;
  std::optional<std::size_t> k;
};

struct RenderOptionsCli {
  std::string scene, segments, out_dir;
  int object = 0;
  std::optional<int> views;
};

struct ValidateOptions {
  std::string scene, segments, graph;
};

PipelineConfig effective_config(const GlobalOptions& g) {
  PipelineConfig config;
  if (!g.config_file.empty()) apply_config_file(config, g.config_file);
  config.client.apply_environment();
  if (g.offline) config.client.offline = true;
  if (g.workers) config.workers = *g.workers;
  if (!g.replay_dir.empty()) config.client.replay_dir = g.replay_dir;
  if (!g.record_dir.empty()) config.client.record_dir = g.record_dir;
  return config;
}

int cmd_build(const GlobalOptions& g, const BuildOptions& b, std::ostream& out, std::ostream& err) {
  auto config = effective_config(g);
  if (b.views) config.front.rig.num_views = *b.views;
  if (b.no_enrich) config.enrich = false;
  if (b.keep_going) config.keep_going = true;
  if (!b.dump_views.empty()) config.dump_views_dir = b.dump_views;
  if (!b.references.empty()) config.reference_db = b.references;
  config.record_timings = b.timings || !config.client.offline;

  const auto clients = make_clients(config.client);
  const auto graph = run_pipeline(config, {b.scene, b.segments}, clients,
                                  [&](const std::string& message) { err << "warning: " << message << "\n"; });
  save_graph(graph, b.out);
  out << "wrote " << b.out << ": " << graph.nodes.size() << " nodes, " << graph.edges.size() << " edges\n";
  return kOk;
}

nlohmann::json result_json(const GroundingResult& r, const std::string& query) {
  return {{"query", query},
          {"object_id", r.object_id},
          {"explanation", r.explanation},
          {"pruned_triplet_count", r.pruned_triplet_count}};
}

int cmd_ground(const GlobalOptions& g, const GroundOptions& o, std::ostream& out) {
  auto config = effective_config(g);
  if (o.k) config.grounding.top_k = *o.k;
  const auto graph = load_graph(o.graph);
  const auto clients = make_clients(config.client);
  std::vector<std::string> queries;
  if (!o.query.empty()) queries.push_back(o.query);
  if (!o.queries.empty()) {
    for (auto& q : read_queries(o.queries)) queries.push_back(std::move(q.query));
  }
  TripletEmbeddingCache cache;
  for (const auto& q : queries) {
    const auto result = answer_query(graph, q, config.grounding, *clients.embedding, *clients.text, &cache);
    out << result_json(result, q).dump() << "\n";
  }
  return kOk;
}

int cmd_eval(const GlobalOptions& g, const EvalOptions& o, std::ostream& out) {
  auto config = effective_config(g);
  if (o.k) config.grounding.top_k = *o.k;
  const auto graph = load_graph(o.graph);
  const auto queries = read_queries(o.queries);
  const auto clients = make_clients(config.client);
  const auto report = eval_grounding(graph, queries, config.grounding, *clients.embedding, *clients.text);
  const auto doc = report.to_json();
  if (!o.report.empty()) {
    std::ofstream file(o.report);
    if (!file) throw IoError("cannot write report", o.report);
    file << doc.dump(2) << "\n";
  }
  const auto& acc = doc["accuracy"];
  out << "accuracy: " << (acc.is_string() ? acc.get<std::string>() : acc.dump()) << " ("
      << report.correct << "/" << report.total << ")\n";
  for (const auto& [name, score] : report.per_category) {
    out << "  " << name << ": " << score.correct << "/" << score.total << "\n";
  }
  return kOk;
}

int cmd_render(const GlobalOptions& g, const RenderOptionsCli& o, std::ostream& out) {
  auto config = effective_config(g);
  if (o.views) config.front.rig.num_views = *o.views;
  config.front.validate();
  const auto scene = load_scene(o.scene, o.segments);
  const auto violations = validate_scene(scene.mesh, scene.instances);
  if (!violations.empty()) throw ValidationError(violations);
  const ObjectInstance* object = nullptr;
  for (const auto& instance : scene.instances) {
    if (instance.id == o.object) object = &instance;
  }
  if (!object) throw InvalidArgument("no object with id " + std::to_string(o.object));

  const auto geometry = isolate_object(scene.mesh, *object);
  const auto poses =
      rig_positions(object->centroid, rig_radius(object->aabb, config.front.rig), config.front.rig.num_views);
  std::filesystem::create_directories(o.out_dir);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const auto path = std::filesystem::path(o.out_dir) / ("view_" + std::to_string(i) + ".png");
    write_png(render_view(geometry, poses[i], config.front.render), path);
  }
  out << "rendered " << poses.size() << " views of object " << o.object << " into " << o.out_dir << "\n";
  return kOk;
}

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<std::string> violations;
  if (!o.graph.empty()) {
    violations = validate_graph(load_graph(o.graph));
  } else {
    const auto scene = load_scene(o.scene, o.segments);
    violations = validate_scene(scene.mesh, scene.instances);
  }
  if (violations.empty()) {
    out << "ok\n";
    return kOk;
  }
  for (const auto& v : violations) err << "violation: " << v << "\n";
  return kDataError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Viewpoint-invariant 3D scene graphs and object grounding", "vsg"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--config", global.config_file, "INI configuration file")->check(CLI::ExistingFile);
  app.add_flag("--offline", global.offline, "Use the deterministic offline models");
  app.add_option("--workers", global.workers, "Worker threads for per-object stages");
  app.add_option("--replay", global.replay_dir, "Serve model responses from recordings");
  app.add_option("--record", global.record_dir, "Record live model responses");

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "Build a scene graph from a mesh and segmentation");
  build_cmd->fallthrough();
  build_cmd->add_option("--scene", build.scene, "Scene mesh (PLY)")->required();
  build_cmd->add_option("--segments", build.segments, "Segmentation JSON")->required();
  build_cmd->add_option("--out", build.out, "Output graph JSON")->required();
  build_cmd->add_option("--views", build.views, "Number of rig views");
  build_cmd->add_flag("--no-enrich", build.no_enrich, "Keep the rule-based relation labels");
  build_cmd->add_option("--dump-views", build.dump_views, "Write rendered rig views here");
  build_cmd->add_flag("--keep-going", build.keep_going, "Skip objects that fail instead of aborting");
  build_cmd->add_option("--references", build.references, "Reference image directory (manifest.json)");
  build_cmd->add_flag("--timings", build.timings, "Record timestamps and stage timings offline too");

  GroundOptions ground;
  auto* ground_cmd = app.add_subcommand("ground", "Answer grounding queries over a graph");
  ground_cmd->fallthrough();
  ground_cmd->add_option("--graph", ground.graph, "Scene graph JSON")->required();
  auto* q = ground_cmd->add_option("--query", ground.query, "Single query text");
  auto* qs = ground_cmd->add_option("--queries", ground.queries, "JSONL query file");
  q->excludes(qs);
  ground_cmd->add_option("--k", ground.k, "Number of relations kept after pruning");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score grounding accuracy on a query set");
  eval_cmd->fallthrough();
  eval_cmd->add_option("--graph", eval.graph, "Scene graph JSON")->required();
  eval_cmd->add_option("--queries", eval.queries, "JSONL query file")->required();
  eval_cmd->add_option("--report", eval.report, "Write the JSON report here");
  eval_cmd->add_option("--k", eval.k, "Number of relations kept after pruning");

  RenderOptionsCli render;
  auto* render_cmd = app.add_subcommand("render-views", "Render the rig views of one object");
  render_cmd->fallthrough();
  render_cmd->add_option("--scene", render.scene, "Scene mesh (PLY)")->required();
  render_cmd->add_option("--segments", render.segments, "Segmentation JSON")->required();
  render_cmd->add_option("--object", render.object, "Object id")->required();
  render_cmd->add_option("--out-dir", render.out_dir, "Output directory")->required();
  render_cmd->add_option("--views", render.views, "Number of rig views");

  ValidateOptions validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scene or a graph");
  validate_cmd->fallthrough();
  auto* vs = validate_cmd->add_option("--scene", validate.scene, "Scene mesh (PLY)");
  auto* vseg = validate_cmd->add_option("--segments", validate.segments, "Segmentation JSON");
  auto* vg = validate_cmd->add_option("--graph", validate.graph, "Scene graph JSON");
  vs->needs(vseg);
  vseg->needs(vs);
  vg->excludes(vs);
  vg->excludes(vseg);

  try {
    app.parse(argc, argv);
    if (ground_cmd->parsed() && ground.query.empty() && ground.queries.empty()) {
      throw CLI::RequiredError("--query or --queries");
    }
    if (validate_cmd->parsed() && validate.graph.empty() && validate.scene.empty()) {
      throw CLI::RequiredError("--graph or --scene/--segments");
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (build_cmd->parsed()) return cmd_build(global, build, out, err);
    if (ground_cmd->parsed()) return cmd_ground(global, ground, out);
    if (eval_cmd->parsed()) return cmd_eval(global, eval, out);
    if (render_cmd->parsed()) return cmd_render(global, render, out);
    if (validate_cmd->parsed()) return cmd_validate(validate, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PipelineError& e) {
    err << "error: " << e.what() << "\n";
    return e.service_failure() ? kServiceError : kDataError;
  } catch (const ServiceError& e) {
    err << "service error: " << e.what() << "\n";
    return kServiceError;
  } catch (const ResponseParseError& e) {
    err << "service error: " << e.what() << "\n";
    return kServiceError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace vsg::cli
