#pragma once

#include <mutex>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vsg/clients.hpp"

namespace vsg {

/// 32x32 (by default) box-filtered luminance image, row-major, in [0,1].
std::vector<double> grayscale_downsample(const RasterImage& image, int size = 32);

/// Zero-mean normalized cross-correlation of two equal-length signals, clamped to
/// [0,1]. Identical non-constant signals score 1.
double normalized_correlation(std::span<const double> a, std::span<const double> b);

/// Name of the most frequent hue bucket among non-background pixels.
std::string dominant_color_name(const RasterImage& image);

/// Deterministic stand-in for a multimodal model. Front-view confidence is the
/// downsampled correlation with the reference (uniform when there is none);
/// attributes are derived from pixel statistics and the class label.
class OfflineVisionModel final : public VisionModel {
 public:
  FrontViewJudgment identify_front_view(const RasterImage* reference,
                                        std::span<const RasterImage> views,
                                        std::string_view class_label) override;
  ViewAttributes extract_view_attributes(const RasterImage& view,
                                         std::string_view class_label) override;
};

/// Deterministic text model that dispatches on the prompt's task tag.
///  - relation_enrichment: returns every relation unchanged.
///  - grounding: picks the node whose caption shares the most query tokens.
///  - aggregate_attributes: majority rule over the submitted records.
class OfflineTextModel final : public TextModel {
 public:
  std::string complete_text(std::string_view prompt, std::string_view context) override;
};

/// Signed feature hashing of whitespace tokens into `dimension` buckets.
class HashingEmbeddingModel final : public EmbeddingModel {
 public:
  explicit HashingEmbeddingModel(std::size_t dimension = 256) : dimension_(dimension) {}
  std::vector<double> embed_text(std::string_view text) override;
  std::string name() const override;

 private:
  std::size_t dimension_;
};

/// Grounding oracle used by the offline text model: number of distinct query
/// tokens (articles excluded) present in the caption.
std::size_t caption_token_overlap(std::string_view query, std::string_view caption);

}  // namespace vsg
