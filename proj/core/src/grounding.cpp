#include "vsg/grounding.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <numeric>

#include "vsg/errors.hpp"
#include "vsg/hashing.hpp"
#include "vsg/prompts.hpp"
#include "vsg/text.hpp"

namespace vsg {
namespace {

using json = nlohmann::json;

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::string label_of(const SceneGraph& graph, int id) {
  const auto index = graph.find_node(id);
  return index ? graph.nodes[*index].class_label : std::string("object");
}

bool better(const ScoredEdge& a, const ScoredEdge& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.edge_index < b.edge_index;
}

// Integers in `text` that are not part of a decimal number, in order.
std::vector<long long> standalone_integers(const std::string& text) {
  std::vector<long long> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    const bool dotted_before = i > 0 && text[i - 1] == '.';
    const bool dotted_after = j + 1 < text.size() && text[j] == '.' &&
                              std::isdigit(static_cast<unsigned char>(text[j + 1]));
    if (!dotted_before && !dotted_after && j - i <= 18) out.push_back(std::stoll(text.substr(i, j - i)));
    i = j;
  }
  return out;
}

bool contains_word(const std::string& haystack, const std::string& needle) {
  if (needle.empty()) return false;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) {
    const bool start_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(haystack[pos - 1]));
    const auto end = pos + needle.size();
    const bool end_ok = end >= haystack.size() || !std::isalnum(static_cast<unsigned char>(haystack[end]));
    if (start_ok && end_ok) return true;
  }
  return false;
}

}  // namespace

void GroundingConfig::validate() const {
  if (top_k < 1) throw InvalidArgument("top_k must be at least 1");
}

std::vector<std::string> triplet_strings(const SceneGraph& graph) {
  std::vector<std::string> out;
  out.reserve(graph.edges.size());
  for (const auto& edge : graph.edges) {
    out.push_back(label_of(graph, edge.subject_id) + " " + edge.relation + " " +
                  label_of(graph, edge.object_id));
  }
  return out;
}

const std::vector<std::vector<double>>& TripletEmbeddingCache::get(const SceneGraph& graph,
                                                                   EmbeddingModel& model) {
  const auto triplets = triplet_strings(graph);
  const auto key = model.name() + "|" + sha256_hex(join(triplets, "\n"));
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it != entries_.end()) return it->second;
  std::vector<std::vector<double>> embeddings;
  embeddings.reserve(triplets.size());
  for (const auto& t : triplets) embeddings.push_back(model.embed_text(t));
  return entries_.emplace(key, std::move(embeddings)).first->second;
}

std::size_t TripletEmbeddingCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::vector<ScoredEdge> prune_relations(const SceneGraph& graph, std::string_view query,
                                        std::size_t top_k, EmbeddingModel& embedding,
                                        TripletEmbeddingCache* cache) {
  if (top_k < 1) throw InvalidArgument("top_k must be at least 1");
  const auto q = embedding.embed_text(query);

  std::vector<std::vector<double>> local;
  const std::vector<std::vector<double>>* triplets = nullptr;
  if (cache) {
    triplets = &cache->get(graph, embedding);
  } else {
    for (const auto& t : triplet_strings(graph)) local.push_back(embedding.embed_text(t));
    triplets = &local;
  }

  std::vector<ScoredEdge> scored(triplets->size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    scored[i] = {i, cosine_similarity(q, (*triplets)[i])};
  }
  const auto keep = std::min(top_k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), better);
  scored.resize(keep);
  return scored;
}

json grounding_context(const SceneGraph& graph, std::span<const ScoredEdge> relations,
                       std::string_view query) {
  json nodes = json::array();
  for (const auto& node : graph.nodes) {
    json attributes = {{"color", node.attributes.color},
                       {"geometry", node.attributes.geometry},
                       {"functionality", node.attributes.functionality},
                       {"structural_details", node.attributes.structural_details},
                       {"caption", node.attributes.caption}};
    for (const auto& [k, v] : node.attributes.extra) attributes[k] = v;
    nodes.push_back({{"id", node.id},
                     {"label", node.class_label},
                     {"attributes", attributes},
                     {"centroid", vec_json(node.centroid)},
                     {"front", node.front ? vec_json(*node.front) : json(nullptr)}});
  }
  json rels = json::array();
  for (const auto& scored : relations) {
    const auto& edge = graph.edges.at(scored.edge_index);
    rels.push_back({{"subject", edge.subject_id},
                    {"subject_label", label_of(graph, edge.subject_id)},
                    {"relation", edge.relation},
                    {"object", edge.object_id},
                    {"object_label", label_of(graph, edge.object_id)},
                    {"distance_m", edge.distance_m},
                    {"angle_deg", edge.angle_deg}});
  }
  return {{"query", std::string(query)}, {"nodes", nodes}, {"relations", rels}};
}

int resolve_answer(const SceneGraph& graph, const std::string& reply) {
  const auto body = extract_json_object(reply);
  const json parsed = json::parse(body, nullptr, false);
  if (!body.empty() && !parsed.is_discarded() && parsed.is_object()) {
    const auto it = parsed.find("object_id");
    if (it != parsed.end() && it->is_number_integer()) {
      const auto id = it->get<long long>();
      if (id >= INT_MIN && id <= INT_MAX && graph.find_node(static_cast<int>(id))) return static_cast<int>(id);
    }
  }

  for (auto value : standalone_integers(reply)) {
    if (value <= INT_MAX && graph.find_node(static_cast<int>(value))) return static_cast<int>(value);
  }

  const auto lowered = to_lower(reply);
  const Node* by_caption = nullptr;
  for (const auto& node : graph.nodes) {
    const auto caption = to_lower(node.attributes.caption);
    if (caption.empty() || lowered.find(caption) == std::string::npos) continue;
    if (!by_caption || caption.size() > by_caption->attributes.caption.size()) by_caption = &node;
  }
  if (by_caption) return by_caption->id;

  for (const auto& node : graph.nodes) {
    if (contains_word(lowered, to_lower(node.class_label))) return node.id;
  }
  throw UnresolvableAnswer(reply);
}

GroundingResult answer_query(const SceneGraph& graph, std::string_view query,
                             const GroundingConfig& config, EmbeddingModel& embedding,
                             TextModel& text, TripletEmbeddingCache* cache) {
  config.validate();
  if (graph.nodes.empty()) throw EmptyInput("cannot ground a query on an empty graph");
  const auto pruned = prune_relations(graph, query, config.top_k, embedding, cache);

  GroundingResult result;
  result.context = grounding_context(graph, pruned, query);
  result.pruned_triplet_count = pruned.size();
  const auto prompt = prompts::render(prompts::kGrounding, {{"query", std::string(query)}});
  result.response = text.complete_text(prompt, result.context.dump());
  result.object_id = resolve_answer(graph, result.response);

  const auto body = extract_json_object(result.response);
  const json parsed = json::parse(body, nullptr, false);
  if (!body.empty() && !parsed.is_discarded() && parsed.is_object() &&
      parsed.contains("explanation") && parsed["explanation"].is_string()) {
    result.explanation = parsed["explanation"].get<std::string>();
  } else {
    result.explanation = result.response;
  }
  return result;
}

}  // namespace vsg
