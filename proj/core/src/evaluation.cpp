#include "vsg/evaluation.hpp"

#include <fstream>

#include "vsg/errors.hpp"

namespace vsg {

using nlohmann::json;

std::vector<GroundingQuery> parse_queries(std::istream& in) {
  std::vector<GroundingQuery> queries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "line " + std::to_string(line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(e.what(), where);
    }
    if (!record.is_object()) throw ParseError("query record must be an object", where);
    auto q = record.find("query");
    auto t = record.find("target_id");
    if (q == record.end() || !q->is_string()) throw ParseError("missing string 'query'", where);
    if (t == record.end() || !t->is_number_integer()) throw ParseError("missing integer 'target_id'", where);
    GroundingQuery out{q->get<std::string>(), t->get<int>(), {}};
    if (auto c = record.find("category"); c != record.end() && c->is_string()) out.category = c->get<std::string>();
    queries.push_back(std::move(out));
  }
  return queries;
}

std::vector<GroundingQuery> read_queries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open queries", path.string());
  return parse_queries(in);
}

std::optional<double> EvaluationReport::accuracy() const {
  if (total == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(total);
}

json EvaluationReport::to_json() const {
  auto ratio = [](std::size_t c, std::size_t t) -> json {
    return t == 0 ? json("n/a") : json(static_cast<double>(c) / static_cast<double>(t));
  };
  json categories = json::object();
  for (const auto& [name, score] : per_category) {
    categories[name] = {{"total", score.total}, {"correct", score.correct}, {"accuracy", ratio(score.correct, score.total)}};
  }
  json verdict_list = json::array();
  for (const auto& v : verdicts) {
    json entry = {{"query", v.query.query},
                  {"target_id", v.query.target_id},
                  {"predicted_id", v.predicted_id ? json(*v.predicted_id) : json(nullptr)},
                  {"correct", v.correct}};
    if (!v.query.category.empty()) entry["category"] = v.query.category;
    if (!v.error.empty()) entry["error"] = v.error;
    verdict_list.push_back(std::move(entry));
  }
  return {{"total", total},
          {"correct", correct},
          {"accuracy", ratio(correct, total)},
          {"per_category", std::move(categories)},
          {"verdicts", std::move(verdict_list)}};
}

EvaluationReport eval_grounding(const SceneGraph& graph, std::span<const GroundingQuery> queries,
                                const GroundingConfig& config, EmbeddingModel& embedding, TextModel& text) {
  EvaluationReport report;
  TripletEmbeddingCache cache;
  for (const auto& query : queries) {
    QueryVerdict verdict{query, std::nullopt, false, {}};
    try {
      verdict.predicted_id = answer_query(graph, query.query, config, embedding, text, &cache).object_id;
      verdict.correct = *verdict.predicted_id == query.target_id;
    } catch (const UnresolvableAnswer& e) {
      verdict.error = e.what();
    }
    ++report.total;
    if (verdict.correct) ++report.correct;
    if (!query.category.empty()) {
      auto& score = report.per_category[query.category];
      ++score.total;
      if (verdict.correct) ++score.correct;
    }
    report.verdicts.push_back(std::move(verdict));
  }
  return report;
}

}  // namespace vsg
