#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vsg/grounding.hpp"

namespace vsg {

struct GroundingQuery {
  std::string query;
  int target_id = 0;
  std::string category;
};

/// One JSON record per line: {"query", "target_id", "category" (optional)}.
/// Blank lines are skipped.
std::vector<GroundingQuery> read_queries(const std::filesystem::path& path);
std::vector<GroundingQuery> parse_queries(std::istream& in);

struct QueryVerdict {
  GroundingQuery query;
  std::optional<int> predicted_id;
  bool correct = false;
  std::string error;
};

struct CategoryScore {
  std::size_t total = 0;
  std::size_t correct = 0;
};

struct EvaluationReport {
  std::vector<QueryVerdict> verdicts;
  std::size_t total = 0;
  std::size_t correct = 0;
  std::map<std::string, CategoryScore> per_category;

  /// Top-1 accuracy, or nullopt with no queries.
  std::optional<double> accuracy() const;
  nlohmann::json to_json() const;
};

/// Runs answer_query per record. Unresolvable answers count as incorrect.
EvaluationReport eval_grounding(const SceneGraph& graph, std::span<const GroundingQuery> queries,
                                const GroundingConfig& config, EmbeddingModel& embedding,
                                TextModel& text);

}  // namespace vsg
