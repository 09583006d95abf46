#include "doctest.h"

#include "support.hpp"
#include "vsg/errors.hpp"
#include "vsg/offline_clients.hpp"

using namespace vsg;

namespace {

class CountingEmbedding final : public EmbeddingModel {
 public:
  std::vector<double> embed_text(std::string_view text) override {
    ++calls;
    return inner.embed_text(text);
  }
  std::string name() const override { return inner.name(); }
  HashingEmbeddingModel inner;
  int calls = 0;
};

class CannedText final : public TextModel {
 public:
  explicit CannedText(std::string reply) : reply_(std::move(reply)) {}
  std::string complete_text(std::string_view, std::string_view context) override {
    last_context = nlohmann::json::parse(context);
    return reply_;
  }
  nlohmann::json last_context;

 private:
  std::string reply_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return (na == 0.0 || nb == 0.0) ? 0.0 : sum / std::sqrt(na * nb);
}

std::vector<double> oracle_similarities(const SceneGraph& g, const std::string& query, EmbeddingModel& model) {
  std::map<int, std::string> labels;
  for (const auto& n : g.nodes) labels[n.id] = n.class_label;
  const auto q = model.embed_text(query);
  std::vector<double> out;
  for (const auto& e : g.edges) {
    out.push_back(dot(q, model.embed_text(labels[e.subject_id] + " " + e.relation + " " + labels[e.object_id])));
  }
  return out;
}

SceneGraph chair_table() {
  SceneGraph g;
  g.nodes.resize(2);
  g.nodes[0].id = 1;
  g.nodes[0].class_label = "chair";
  g.nodes[1].id = 2;
  g.nodes[1].class_label = "table";
  g.edges.push_back({1, 2, "left of", 1.0, 90.0});
  g.edges.push_back({2, 1, "right of", 1.0, -90.0});
  return g;
}

}  // namespace

TEST_SUITE("grounding") {

TEST_CASE("triplet strings follow edge order") {
  const auto g = chair_table();
  CHECK(triplet_strings(g) == std::vector<std::string>{"chair left of table", "table right of chair"});
  CHECK(triplet_strings(SceneGraph{}).empty());
  std::mt19937_64 rng(3);
  CHECK(triplet_strings(testing::random_graph(rng, 3)).size() == 6);
}

TEST_CASE("pruning matches a full stable sort") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> nodes(2, 14);
  std::uniform_int_distribution<std::size_t> kdist(1, 250);
  const std::vector<std::string> queries{"the chair left of the table", "lamp near sofa", "monitor on table",
                                         "something behind the door"};
  HashingEmbeddingModel model;
  for (int trial = 0; trial < 120; ++trial) {
    const auto g = testing::random_graph(rng, nodes(rng));
    const auto& query = queries[static_cast<std::size_t>(trial) % queries.size()];
    const auto k = kdist(rng);
    const auto sims = oracle_similarities(g, query, model);
    const auto expected = testing::prune_oracle(sims, k);
    const auto got = prune_relations(g, query, k, model);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].edge_index == expected[i]);
      CHECK(std::abs(got[i].similarity - sims[expected[i]]) <= 1e-12);
    }
  }
}

TEST_CASE("pruning a 200 edge graph to 50") {
  std::mt19937_64 rng(5);
  auto g = testing::random_graph(rng, 15);
  g.edges.resize(200);
  HashingEmbeddingModel model;
  const auto got = prune_relations(g, "red chair near the lamp", 50, model);
  const auto expected = testing::prune_oracle(oracle_similarities(g, "red chair near the lamp", model), 50);
  REQUIRE(got.size() == 50);
  for (std::size_t i = 0; i < 50; ++i) CHECK(got[i].edge_index == expected[i]);
  CHECK(prune_relations(g, "chair", 5000, model).size() == 200);
  CHECK_THROWS_AS(prune_relations(g, "chair", 0, model), InvalidArgument);
  CHECK(GroundingConfig{}.top_k == 1500);
}

TEST_CASE("triplet embeddings are cached per graph") {
  std::mt19937_64 rng(8);
  const auto g = testing::random_graph(rng, 5);
  CountingEmbedding model;
  TripletEmbeddingCache cache;
  prune_relations(g, "a", 10, model, &cache);
  CHECK(model.calls == 21);
  prune_relations(g, "b", 10, model, &cache);
  CHECK(model.calls == 22);
  CHECK(cache.size() == 1);
  auto other = g;
  other.edges[0].relation = "far";
  prune_relations(other, "b", 10, model, &cache);
  CHECK(cache.size() == 2);
}

TEST_CASE("the context carries every node and only the pruned relations") {
  std::mt19937_64 rng(21);
  const auto g = testing::random_graph(rng, 9);
  HashingEmbeddingModel embed;
  CannedText text(R"({"object_id": 4, "explanation": "it matches"})");
  GroundingConfig config;
  config.top_k = 10;
  const auto result = answer_query(g, "the lamp", config, embed, text);
  CHECK(result.object_id == 4);
  CHECK(result.explanation == "it matches");
  CHECK(result.pruned_triplet_count == 10);
  CHECK(text.last_context["nodes"].size() == 9);
  CHECK(text.last_context["relations"].size() == 10);
  CHECK(text.last_context["query"] == "the lamp");
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    CHECK(text.last_context["nodes"][i]["id"] == g.nodes[i].id);
    CHECK(text.last_context["nodes"][i]["attributes"]["caption"] == g.nodes[i].attributes.caption);
  }
}

TEST_CASE("single node graphs need no relations") {
  SceneGraph g;
  g.nodes.resize(1);
  g.nodes[0].id = 7;
  g.nodes[0].class_label = "bed";
  g.nodes[0].attributes.caption = "a white bed";
  HashingEmbeddingModel embed;
  OfflineTextModel text;
  const auto result = answer_query(g, "the bed", {}, embed, text);
  CHECK(result.object_id == 7);
  CHECK(result.pruned_triplet_count == 0);
  CHECK_THROWS_AS(answer_query(SceneGraph{}, "the bed", {}, embed, text), EmptyInput);
}

TEST_CASE("answers naming unknown objects are rejected") {
  auto g = chair_table();
  HashingEmbeddingModel embed;
  CannedText text("object 999");
  CHECK_THROWS_AS(answer_query(g, "the sofa", {}, embed, text), UnresolvableAnswer);
}

TEST_CASE("reply resolution order") {
  auto g = chair_table();
  g.nodes[0].attributes.caption = "a red chair";
  g.nodes[1].attributes.caption = "a wooden table";
  CHECK(resolve_answer(g, R"({"object_id": 2})") == 2);
  CHECK(resolve_answer(g, R"({"object_id": 5}) but really 1)") == 1);
  CHECK(resolve_answer(g, "I pick a wooden table") == 2);
  CHECK(resolve_answer(g, "the chair, I think") == 1);
  CHECK(resolve_answer(g, "distance 2.5 to the table") == 2);
  CHECK_THROWS_AS(resolve_answer(g, "no idea"), UnresolvableAnswer);
}

TEST_CASE("grounding is deterministic") {
  std::mt19937_64 rng(77);
  const auto g = testing::random_graph(rng, 8);
  HashingEmbeddingModel embed;
  OfflineTextModel text;
  const auto a = answer_query(g, "a lamp near the sofa", {}, embed, text);
  const auto b = answer_query(g, "a lamp near the sofa", {}, embed, text);
  CHECK(a.object_id == b.object_id);
  CHECK(a.response == b.response);
  CHECK(a.context == b.context);
}

}
