#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "vsg/clients.hpp"
#include "vsg/front_estimator.hpp"
#include "vsg/grounding.hpp"
#include "vsg/relations.hpp"

namespace vsg {

struct PipelineConfig {
  FrontEstimateConfig front;  // rig, threshold, render size
  RelationRuleConfig relations;
  GroundingConfig grounding;
  ClientConfig client;
  bool enrich = true;
  std::size_t enrich_batch_size = 200;
  bool keep_going = false;
  /// Worker threads for per-object stages; 0 picks the hardware concurrency.
  unsigned workers = 0;
  std::string reference_db;
  std::string dump_views_dir;
  /// Store wall-clock timestamps and stage timings in graph metadata.
  bool record_timings = true;

  void validate() const;

  /// Effective configuration, without secrets.
  nlohmann::json to_json() const;
  std::string hash() const;
};

/// Applies an INI document with [rig], [front], [render], [relations],
/// [grounding], [client] and [pipeline] sections on top of `config`.
/// Unknown keys are rejected with InvalidArgument.
void apply_config_file(PipelineConfig& config, const std::filesystem::path& path);
void apply_config_text(PipelineConfig& config, const std::string& ini_text);

}  // namespace vsg
