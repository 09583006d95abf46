#include "doctest.h"

#include <cstdlib>
#include <fstream>

#include "support.hpp"
#include "vsg/errors.hpp"
#include "vsg/image_io.hpp"
#include "vsg/offline_clients.hpp"
#include "vsg/prompts.hpp"
#include "vsg/text.hpp"

using namespace vsg;

namespace {

ViewAttributes record(std::string color, std::string caption = {}) {
  ViewAttributes r;
  r.values.color = std::move(color);
  r.values.caption = std::move(caption);
  return r;
}

RasterImage stripes(int period) {
  RasterImage img(64, 64);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x)
      if ((x / period) % 2 == 0) img.set(x, y, {0, 0, 0});
  return img;
}

}  // namespace

TEST_SUITE("clients") {

TEST_CASE("judgment clamps scores and picks the first maximum") {
  const auto j = FrontViewJudgment::from_confidences({0.2, 1.7, -0.4, 1.0});
  CHECK(j.per_view_confidence == std::vector<double>{0.2, 1.0, 0.0, 1.0});
  CHECK(j.best_index == 1);
}

TEST_CASE("offline front judgment: a view equal to the reference scores 1") {
  std::vector<RasterImage> views;
  for (int p = 2; p < 14; ++p) views.push_back(stripes(p));
  OfflineVisionModel model;
  const auto j = model.identify_front_view(&views[5], views, "chair");
  CHECK(j.per_view_confidence[5] == doctest::Approx(1.0));
  CHECK(j.best_index == 5);
  for (double c : j.per_view_confidence) {
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
  }
}

TEST_CASE("offline front judgment without reference is uniform") {
  std::vector<RasterImage> views(4, stripes(3));
  OfflineVisionModel model;
  const auto j = model.identify_front_view(nullptr, views, "chair");
  for (double c : j.per_view_confidence) CHECK(c == doctest::Approx(0.25));
  CHECK(j.best_index == 0);
  const auto again = model.identify_front_view(nullptr, views, "chair");
  CHECK(again.per_view_confidence == j.per_view_confidence);
}

TEST_CASE("offline attributes echo the label and read the dominant hue") {
  RasterImage img(32, 32);
  for (int y = 4; y < 28; ++y)
    for (int x = 8; x < 24; ++x) img.set(x, y, {220, 20, 20});
  OfflineVisionModel model;
  const auto r = model.extract_view_attributes(img, "chair");
  CHECK(r.values.color == "red");
  CHECK(r.values.caption.find("chair") != std::string::npos);
  CHECK(r.values.functionality == "seating");
  CHECK(r.values.geometry == "tall silhouette");
  CHECK(model.extract_view_attributes(img, "widget").values.functionality == "general use");
}

TEST_CASE("dominant color buckets") {
  auto solid = [](Rgb c) {
    RasterImage img(4, 4);
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) img.set(x, y, c);
    return img;
  };
  CHECK(dominant_color_name(solid({30, 160, 40})) == "green");
  CHECK(dominant_color_name(solid({40, 60, 220})) == "blue");
  CHECK(dominant_color_name(solid({10, 10, 10})) == "black");
  CHECK(dominant_color_name(solid({128, 128, 128})) == "gray");
  CHECK(dominant_color_name(solid({139, 90, 43})) == "brown");
  CHECK(dominant_color_name(RasterImage(4, 4)).empty());
}

TEST_CASE("attribute records from model JSON") {
  const auto r = view_attributes_from_json(
      {{"color", "red"}, {"caption", "a red chair"}, {"material", "wood"}, {"geometry", {"tall", "thin"}}});
  CHECK(r.values.color == "red");
  CHECK(r.values.geometry == "tall, thin");
  CHECK(r.values.extra.at("material") == "wood");
  CHECK(r.missing_keys == std::vector<std::string>{"functionality", "structural_details"});
  CHECK_THROWS_AS(view_attributes_from_json(nlohmann::json::array()), ResponseParseError);
}

TEST_CASE("majority aggregation and tie-breaks") {
  std::vector<ViewAttributes> rrb{record("red"), record("red"), record("blue")};
  CHECK(majority_attributes(rrb).color == "red");
  std::vector<ViewAttributes> rb{record("red"), record("blue")};
  CHECK(majority_attributes(rb).color == "red");
  std::vector<ViewAttributes> br{record("blue"), record("red")};
  CHECK(majority_attributes(br).color == "blue");
  std::vector<ViewAttributes> empties{record(""), record(""), record("green")};
  CHECK(majority_attributes(empties).color == "green");
  std::vector<ViewAttributes> captions{record("", "a chair"), record("", "a red chair"), record("", "a big chair")};
  CHECK(majority_attributes(captions).caption == "a red chair");
  CHECK_THROWS_AS(majority_attributes({}), EmptyInput);
}

TEST_CASE("aggregation ignores the order of identical records") {
  std::vector<ViewAttributes> records{record("red", "a red chair"), record("red", "a red chair"),
                                      record("red", "a red chair")};
  const auto a = majority_attributes(records);
  std::reverse(records.begin(), records.end());
  CHECK(majority_attributes(records) == a);
}

TEST_CASE("aggregation through the offline text model matches the majority rule") {
  std::vector<ViewAttributes> records{record("red", "a red chair"), record("blue", "a blue seat"),
                                      record("red", "a chair")};
  records[1].values.extra["material"] = "wood";
  OfflineTextModel text;
  CHECK(aggregate_attributes(records, &text) == majority_attributes(records));
  CHECK(aggregate_attributes(records, nullptr) == majority_attributes(records));
}

TEST_CASE("hashing embeddings are unit norm, case-insensitive and share tokens") {
  HashingEmbeddingModel model;
  const auto a = model.embed_text("Red Chair");
  double norm = 0;
  for (double x : a) norm += x * x;
  CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(a.size() == 256);
  CHECK(model.embed_text("red chair") == a);
  const auto chair = model.embed_text("chair");
  const auto lamp = model.embed_text("lamp");
  CHECK(cosine_similarity(a, chair) > cosine_similarity(a, lamp));
  CHECK_THROWS_AS(model.embed_text("  ...  "), EmptyInput);
}

TEST_CASE("offline text model dispatches on the task tag") {
  OfflineTextModel text;
  CHECK_THROWS_WITH_AS(text.complete_text("no tag here", "{}"), doctest::Contains("no fake handler"), ServiceError);
  nlohmann::json context = {{"query", "the red chair"},
                            {"nodes",
                             {{{"id", 3}, {"attributes", {{"caption", "a blue sofa"}}}},
                              {{"id", 7}, {"attributes", {{"caption", "a red chair"}}}}}}};
  const auto reply = nlohmann::json::parse(text.complete_text(prompts::render(prompts::kGrounding, {{"query", "x"}}),
                                                              context.dump()));
  CHECK(reply.at("object_id") == 7);

  nlohmann::json rel = {{"relations", {{{"index", 0}, {"relation", "left of, near"}}}}};
  const auto echoed = nlohmann::json::parse(text.complete_text(prompts::render(prompts::kRelationEnrichment), rel.dump()));
  CHECK(echoed.at("relations")[0].at("relation") == "left of, near");
}

TEST_CASE("caption token overlap ignores articles and case") {
  CHECK(caption_token_overlap("the red chair", "a red chair") == 2);
  CHECK(caption_token_overlap("The RED chair!", "a red chair") == 2);
  CHECK(caption_token_overlap("the a an", "a the an") == 0);
  CHECK(caption_token_overlap("chair chair", "a chair") == 1);
}

TEST_CASE("prompt templates carry task tags") {
  for (auto name : {prompts::kFrontView, prompts::kViewAttributes, prompts::kAggregateAttributes,
                    prompts::kRelationEnrichment, prompts::kGrounding}) {
    CHECK(prompts::task_of(prompts::get(name)) == name);
  }
  CHECK(prompts::render(prompts::kGrounding, {{"query", "find the lamp"}}).find("find the lamp") != std::string::npos);
  CHECK_THROWS_AS(prompts::get("nope"), InvalidArgument);
  CHECK(prompts::task_of("plain text").empty());
}

TEST_CASE("text helpers") {
  CHECK(tokenize("The Red, chair!") == std::vector<std::string>{"the", "red", "chair"});
  CHECK(extract_json_object("Sure: ```json\n{\"a\": {\"b\": 1}}\n``` done") == "{\"a\": {\"b\": 1}}");
  CHECK(extract_json_object("no json").empty());
  CHECK(join({"a", "b"}, ", ") == "a, b");
}

TEST_CASE("reference database lookups") {
  testing::TempDir dir("refs");
  write_png(stripes(4), dir / "chair.png");
  std::ofstream(dir / "manifest.json") << R"({"chair": "chair.png", "lamp": "lamp.png"})";
  const auto db = ReferenceDatabase::load(dir.path());
  const auto chair = lookup_reference(db, "chair");
  REQUIRE(chair.has_value());
  CHECK(*chair == stripes(4));
  CHECK_FALSE(lookup_reference(db, "sofa").has_value());
  CHECK_THROWS_AS(lookup_reference(db, "lamp"), IoError);
  CHECK_THROWS_AS(ReferenceDatabase::load(dir / "missing"), IoError);
}

TEST_CASE("client configuration reads the environment") {
  ClientConfig config;
  ::setenv("VIZOR_API_URL", "http://localhost:9/v1", 1);
  ::setenv("VIZOR_API_KEY", "secret", 1);
  config.apply_environment();
  CHECK(config.endpoint == "http://localhost:9/v1");
  CHECK(config.api_key == "secret");
  ::unsetenv("VIZOR_API_URL");
  ::unsetenv("VIZOR_API_KEY");
  ClientConfig bad;
  bad.max_concurrent = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  ClientConfig live;
  CHECK_THROWS_AS(make_clients(live), InvalidArgument);
  live.offline = true;
  CHECK(make_clients(live).offline);
}

}
