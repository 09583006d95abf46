#include "vsg/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <exception>
#include <iomanip>
#include <optional>
#include <sstream>

#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include "vsg/attributes.hpp"
#include "vsg/errors.hpp"
#include "vsg/front_estimator.hpp"
#include "vsg/image_io.hpp"
#include "vsg/relations.hpp"
#include "vsg/validation.hpp"

namespace vsg {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

bool is_service_failure(std::exception_ptr error) {
  try {
    std::rethrow_exception(error);
  } catch (const ServiceError&) {
    return true;
  } catch (const AttributeExtractionError& e) {
    return e.service_failure();
  } catch (...) {
    return false;
  }
}

std::string describe(std::exception_ptr error) {
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

// Runs `task(i)` for every index inside the arena and collects per-index failures.
template <typename Task>
std::vector<std::exception_ptr> run_stage(tbb::task_arena& arena, std::size_t count, Task&& task) {
  std::vector<std::exception_ptr> failures(count);
  arena.execute([&] {
    tbb::parallel_for(std::size_t{0}, count, [&](std::size_t i) {
      try {
        task(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    });
  });
  return failures;
}

void dump_views(const std::filesystem::path& root, int object_id, const FrontEstimate& estimate) {
  const auto dir = root / ("object_" + std::to_string(object_id));
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < estimate.views.size(); ++k) {
    write_png(estimate.views[k], dir / ("view_" + std::to_string(k) + ".png"));
  }
}

}  // namespace

SceneGraph build_graph(const PipelineConfig& config, const LoadedScene& scene, const Clients& clients,
                       const WarningSink& warn) {
  config.validate();
  auto emit = [&](const std::string& message) {
    if (warn) warn(message);
  };

  const auto violations = validate_scene(scene.mesh, scene.instances);
  if (!violations.empty()) throw ValidationError(violations);

  std::optional<ReferenceDatabase> references;
  if (!config.reference_db.empty()) references = ReferenceDatabase::load(config.reference_db);

  const int workers = config.workers == 0 ? tbb::task_arena::automatic : static_cast<int>(config.workers);
  tbb::task_arena arena(workers);
  json timings = json::object();
  json skipped = json::array();

  // Fronts.
  const auto n = scene.instances.size();
  std::vector<FrontEstimate> estimates(n);
  const bool keep_views = !config.dump_views_dir.empty();
  auto started = Clock::now();
  auto failures = run_stage(arena, n, [&](std::size_t i) {
    estimates[i] = estimate_front(scene.instances[i], scene.mesh, config.front, *clients.vision,
                                  references ? &*references : nullptr, keep_views);
  });
  timings["fronts_ms"] = elapsed_ms(started);

  std::vector<ObjectInstance> kept;
  std::vector<FrontEstimate> kept_estimates;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& object = scene.instances[i];
    if (failures[i]) {
      const auto cause = describe(failures[i]);
      if (!config.keep_going) {
        throw PipelineError("front estimation", object.id, cause, is_service_failure(failures[i]));
      }
      emit("skipping object " + std::to_string(object.id) + " (" + object.class_label + "): " + cause);
      skipped.push_back({{"id", object.id}, {"stage", "front estimation"}, {"reason", cause}});
      continue;
    }
    auto& estimate = estimates[i];
    if (estimate.low_confidence) {
      emit("object " + std::to_string(object.id) + ": no view cleared the front threshold");
    }
    if (keep_views) dump_views(config.dump_views_dir, object.id, estimate);
    ObjectInstance with_front = object;
    with_front.front = estimate.front;
    with_front.front_confidence = estimate.confidence;
    kept.push_back(std::move(with_front));
    kept_estimates.push_back(std::move(estimate));
  }

  // Attributes.
  std::vector<AttributeOutcome> outcomes(kept.size());
  started = Clock::now();
  failures = run_stage(arena, kept.size(), [&](std::size_t i) {
    const auto& estimate = kept_estimates[i];
    outcomes[i] = extract_object_attributes(kept[i], scene.mesh, estimate.rig, estimate.chosen_view,
                                            *clients.vision, clients.text.get(), config.front.render);
  });
  timings["attributes_ms"] = elapsed_ms(started);

  std::vector<Node> nodes;
  nodes.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto& object = kept[i];
    AttributeSet attributes;
    if (failures[i]) {
      const auto cause = describe(failures[i]);
      if (!config.keep_going) {
        throw PipelineError("attribute extraction", object.id, cause, is_service_failure(failures[i]));
      }
      emit("object " + std::to_string(object.id) + ": attribute extraction failed: " + cause);
      attributes.extra["attribute_status"] = "failed";
    } else {
      attributes = std::move(outcomes[i].attributes);
      if (outcomes[i].partial()) {
        emit("object " + std::to_string(object.id) + ": " + std::to_string(outcomes[i].failed_views.size()) +
             " attribute view(s) failed");
        attributes.extra["attribute_status"] = "partial";
      }
    }
    if (attributes.caption.empty()) attributes.caption = object.class_label;
    nodes.push_back(to_node(object, std::move(attributes)));
  }

  // Edges.
  started = Clock::now();
  EnrichmentOptions enrichment;
  enrichment.model = clients.text.get();
  enrichment.nodes = nodes;
  enrichment.batch_size = config.enrich_batch_size;
  SceneGraph graph;
  try {
    graph.edges = build_edges(kept, scene.mesh, config.relations, config.enrich ? &enrichment : nullptr);
  } catch (const ServiceError& e) {
    throw PipelineError("relation enrichment", -1, e.what(), true);
  } catch (const ResponseParseError& e) {
    throw PipelineError("relation enrichment", -1, e.what(), false);
  }
  timings["edges_ms"] = elapsed_ms(started);
  graph.nodes = std::move(nodes);

  auto& meta = graph.metadata;
  meta["scene"] = scene.name;
  meta["config"] = config.to_json();
  meta["config_hash"] = config.hash();
  meta["object_count"] = graph.nodes.size();
  meta["edge_count"] = graph.edges.size();
  if (!skipped.empty()) meta["skipped_objects"] = std::move(skipped);
  if (config.record_timings) {
    meta["created_at"] = utc_timestamp();
    meta["timings"] = std::move(timings);
  }
  return graph;
}

SceneGraph run_pipeline(const PipelineConfig& config, const ScenePaths& paths, const Clients& clients,
                        const WarningSink& warn) {
  const auto started = Clock::now();
  const auto scene = load_scene(paths.mesh, paths.segmentation);
  const double load_ms = elapsed_ms(started);
  auto graph = build_graph(config, scene, clients, warn);
  if (config.record_timings) graph.metadata["timings"]["load_ms"] = load_ms;
  return graph;
}

}  // namespace vsg
