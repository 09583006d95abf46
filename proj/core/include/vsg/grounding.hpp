#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "vsg/clients.hpp"
#include "vsg/types.hpp"

namespace vsg {

struct GroundingConfig {
  std::size_t top_k = 1500;

  void validate() const;
};

struct ScoredEdge {
  std::size_t edge_index = 0;
  double similarity = 0.0;
};

struct GroundingResult {
  int object_id = 0;
  std::string explanation;
  std::size_t pruned_triplet_count = 0;
  /// Raw model reply.
  std::string response;
  /// The context document sent to the model.
  nlohmann::json context;
};

/// "<subject label> <relation> <object label>" for every edge, in edge order.
std::vector<std::string> triplet_strings(const SceneGraph& graph);

/// Triplet embeddings keyed by embedding model and graph content, so repeated
/// queries on one graph embed each triplet once.
class TripletEmbeddingCache {
 public:
  const std::vector<std::vector<double>>& get(const SceneGraph& graph, EmbeddingModel& model);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<std::vector<double>>> entries_;
};

/// The min(K, |E|) edges most similar to the query, by descending cosine
/// similarity with ties going to the lower edge index.
std::vector<ScoredEdge> prune_relations(const SceneGraph& graph, std::string_view query,
                                        std::size_t top_k, EmbeddingModel& embedding,
                                        TripletEmbeddingCache* cache = nullptr);

/// Context for the answering model: every node with its attributes plus the
/// given relations.
nlohmann::json grounding_context(const SceneGraph& graph, std::span<const ScoredEdge> relations,
                                 std::string_view query);

/// Resolves a model reply to a node id: an explicit integer id first, then a
/// node caption appearing in the reply, then a class label. Throws
/// UnresolvableAnswer when nothing matches.
int resolve_answer(const SceneGraph& graph, const std::string& reply);

GroundingResult answer_query(const SceneGraph& graph, std::string_view query,
                             const GroundingConfig& config, EmbeddingModel& embedding,
                             TextModel& text, TripletEmbeddingCache* cache = nullptr);

}  // namespace vsg
