#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vsg/render.hpp"
#include "vsg/types.hpp"

namespace vsg {

/// One canonical front-view image per class, described by `manifest.json`
/// (label -> file name relative to the directory).
struct ReferenceDatabase {
  std::filesystem::path directory;
  std::map<std::string, std::string> manifest;

  static ReferenceDatabase load(const std::filesystem::path& directory);
};

/// The class image, or nullopt when the label is not in the manifest.
/// Throws IoError when a listed file cannot be read.
std::optional<RasterImage> lookup_reference(const ReferenceDatabase& db, std::string_view class_label);

struct FrontViewJudgment {
  std::vector<double> per_view_confidence;
  std::size_t best_index = 0;

  /// Clamps scores to [0,1] and sets best_index to the first maximum.
  static FrontViewJudgment from_confidences(std::vector<double> confidences);
};

/// Attribute record produced from a single view.
struct ViewAttributes {
  AttributeSet values;
  /// Standard keys absent from the model output (filled with "").
  std::vector<std::string> missing_keys;
};

/// Builds a record from a JSON object; unknown string members land in `extra`.
ViewAttributes view_attributes_from_json(const nlohmann::json& object);
nlohmann::json to_json(const ViewAttributes& record);

class VisionModel {
 public:
  virtual ~VisionModel() = default;

  /// Scores every view for being the object's front. `reference` may be null.
  virtual FrontViewJudgment identify_front_view(const RasterImage* reference,
                                                std::span<const RasterImage> views,
                                                std::string_view class_label) = 0;

  virtual ViewAttributes extract_view_attributes(const RasterImage& view,
                                                 std::string_view class_label) = 0;
};

class TextModel {
 public:
  virtual ~TextModel() = default;
  virtual std::string complete_text(std::string_view prompt, std::string_view context) = 0;
};

class EmbeddingModel {
 public:
  virtual ~EmbeddingModel() = default;
  /// Unit-norm embedding. Throws EmptyInput for empty text.
  virtual std::vector<double> embed_text(std::string_view text) = 0;
  /// Identifies the embedding space, used to key caches.
  virtual std::string name() const = 0;
};

/// Per-field majority over non-empty values (ties go to the value seen first),
/// caption = longest caption (ties to the lowest index).
AttributeSet majority_attributes(std::span<const ViewAttributes> records);

/// Consolidates per-view records. With no `consolidator` the majority rule is
/// used; otherwise the text model is asked to merge them.
AttributeSet aggregate_attributes(std::span<const ViewAttributes> records, TextModel* consolidator);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct ClientConfig {
  std::string endpoint;
  std::string api_key;
  std::string chat_model = "gpt-4o";
  std::string embedding_model = "all-mpnet-base-v2";
  double timeout_s = 60.0;
  int max_retries = 3;
  int max_concurrent = 4;
  bool offline = false;
  /// When set, responses are served from recordings in this directory.
  std::string replay_dir;
  /// When set, live responses are also written here for later replay.
  std::string record_dir;

  void validate() const;
  /// Fills endpoint/api_key from VIZOR_API_URL / VIZOR_API_KEY when present.
  void apply_environment();
};

struct Clients {
  std::shared_ptr<VisionModel> vision;
  std::shared_ptr<TextModel> text;
  std::shared_ptr<EmbeddingModel> embedding;
  bool offline = true;
};

/// Offline fakes, replayed recordings or live HTTP clients depending on `config`.
Clients make_clients(const ClientConfig& config);

}  // namespace vsg
