#include "vsg/offline_clients.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "vsg/errors.hpp"
#include "vsg/hashing.hpp"
#include "vsg/prompts.hpp"
#include "vsg/text.hpp"

namespace vsg {
namespace {

using json = nlohmann::json;

bool is_background(Rgb c) { return c == kBackground; }

const std::map<std::string, std::string, std::less<>>& functionality_table() {
  static const std::map<std::string, std::string, std::less<>> table{
      {"armchair", "seating"},          {"bed", "sleeping"},
      {"bin", "waste disposal"},        {"bookshelf", "storage for books"},
      {"cabinet", "storage"},           {"chair", "seating"},
      {"desk", "work surface"},         {"lamp", "lighting"},
      {"monitor", "displaying content"}, {"plant", "decoration"},
      {"shelf", "storage"},             {"sofa", "seating"},
      {"table", "surface for placing items"}, {"tv", "displaying content"},
  };
  return table;
}

json parse_context(std::string_view context) {
  json doc = json::parse(context, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ResponseParseError("offline text model received a non-JSON context", std::string(context));
  }
  return doc;
}

std::string fake_enrichment(const json& context) {
  json out = {{"relations", json::array()}};
  for (const auto& r : context.value("relations", json::array())) {
    out["relations"].push_back({{"index", r.at("index")}, {"relation", r.at("relation")}});
  }
  return out.dump();
}

std::string fake_grounding(const json& context) {
  const auto query = context.value("query", std::string());
  const auto& nodes = context.at("nodes");
  if (!nodes.is_array() || nodes.empty()) {
    throw ResponseParseError("grounding context has no nodes", context.dump());
  }
  std::size_t best = 0;
  std::size_t best_overlap = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto caption = nodes[i].at("attributes").value("caption", std::string());
    const auto overlap = caption_token_overlap(query, caption);
    if (overlap > best_overlap) {
      best = i;
      best_overlap = overlap;
    }
  }
  const auto& chosen = nodes[best];
  const auto caption = chosen.at("attributes").value("caption", std::string());
  json reply = {
      {"object_id", chosen.at("id")},
      {"explanation", "caption \"" + caption + "\" shares " + std::to_string(best_overlap) +
                          " token(s) with the query"},
  };
  return reply.dump();
}

std::string fake_aggregation(const json& context) {
  std::vector<ViewAttributes> records;
  for (const auto& r : context.value("records", json::array())) {
    records.push_back(view_attributes_from_json(r));
  }
  ViewAttributes merged;
  merged.values = majority_attributes(records);
  return to_json(merged).dump();
}

}  // namespace

std::vector<double> grayscale_downsample(const RasterImage& image, int size) {
  if (size <= 0 || image.width <= 0 || image.height <= 0) {
    throw InvalidArgument("downsample needs a non-empty image and positive size");
  }
  std::vector<double> out(static_cast<std::size_t>(size) * size, 0.0);
  for (int cy = 0; cy < size; ++cy) {
    const int y0 = cy * image.height / size;
    const int y1 = std::max(y0 + 1, (cy + 1) * image.height / size);
    for (int cx = 0; cx < size; ++cx) {
      const int x0 = cx * image.width / size;
      const int x1 = std::max(x0 + 1, (cx + 1) * image.width / size);
      double sum = 0.0;
      int count = 0;
      for (int y = y0; y < std::min(y1, image.height); ++y) {
        for (int x = x0; x < std::min(x1, image.width); ++x) {
          const Rgb c = image.at(x, y);
          sum += (0.299 * c.r + 0.587 * c.g + 0.114 * c.b) / 255.0;
          ++count;
        }
      }
      out[static_cast<std::size_t>(cy) * size + cx] = count ? sum / count : 0.0;
    }
  }
  return out;
}

double normalized_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("signals must have equal, nonzero length");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return std::clamp(cov / std::sqrt(va * vb), 0.0, 1.0);
}

std::string dominant_color_name(const RasterImage& image) {
  static constexpr std::array<const char*, 11> kNames{
      "red", "orange", "yellow", "green", "cyan", "blue", "purple", "pink", "brown", "white", "gray"};
  std::array<std::size_t, 12> counts{};  // last slot: black
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const Rgb c = image.at(x, y);
      if (is_background(c)) continue;
      const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
      const double mx = std::max({r, g, b});
      const double mn = std::min({r, g, b});
      const double sat = mx > 0.0 ? (mx - mn) / mx : 0.0;
      std::size_t bucket;
      if (mx < 0.2) {
        bucket = 11;
      } else if (sat < 0.2) {
        bucket = mx > 0.85 ? 9 : 10;
      } else {
        double hue;
        const double d = mx - mn;
        if (mx == r) {
          hue = 60.0 * std::fmod((g - b) / d, 6.0);
        } else if (mx == g) {
          hue = 60.0 * ((b - r) / d + 2.0);
        } else {
          hue = 60.0 * ((r - g) / d + 4.0);
        }
        if (hue < 0.0) hue += 360.0;
        if (hue < 15.0 || hue >= 340.0) bucket = 0;
        else if (hue < 45.0) bucket = mx < 0.65 ? 8 : 1;
        else if (hue < 70.0) bucket = 2;
        else if (hue < 160.0) bucket = 3;
        else if (hue < 200.0) bucket = 4;
        else if (hue < 260.0) bucket = 5;
        else if (hue < 300.0) bucket = 6;
        else bucket = 7;
      }
      ++counts[bucket];
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[best]) best = i;
  }
  if (counts[best] == 0) return {};
  return best == 11 ? "black" : kNames[best];
}

FrontViewJudgment OfflineVisionModel::identify_front_view(const RasterImage* reference,
                                                          std::span<const RasterImage> views,
                                                          std::string_view) {
  if (views.empty()) throw EmptyInput("no views to judge");
  std::vector<double> confidences;
  confidences.reserve(views.size());
  if (reference == nullptr) {
    confidences.assign(views.size(), 1.0 / static_cast<double>(views.size()));
  } else {
    const auto ref = grayscale_downsample(*reference);
    for (const auto& view : views) {
      confidences.push_back(normalized_correlation(grayscale_downsample(view), ref));
    }
  }
  return FrontViewJudgment::from_confidences(std::move(confidences));
}

ViewAttributes OfflineVisionModel::extract_view_attributes(const RasterImage& view,
                                                           std::string_view class_label) {
  ViewAttributes record;
  const std::string label(class_label);

  int x0 = view.width, y0 = view.height, x1 = -1, y1 = -1;
  std::size_t covered = 0;
  for (int y = 0; y < view.height; ++y) {
    for (int x = 0; x < view.width; ++x) {
      if (is_background(view.at(x, y))) continue;
      ++covered;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }

  record.values.color = dominant_color_name(view);
  if (covered > 0) {
    const double aspect = static_cast<double>(y1 - y0 + 1) / static_cast<double>(x1 - x0 + 1);
    record.values.geometry = aspect > 1.3 ? "tall silhouette"
                             : aspect < 1.0 / 1.3 ? "wide silhouette"
                                                  : "compact silhouette";
    const double fraction =
        static_cast<double>(covered) / (static_cast<double>(view.width) * view.height);
    record.values.structural_details = fraction < 0.05   ? "small visible area"
                                       : fraction < 0.2 ? "moderate visible area"
                                                        : "large visible area";
  }
  const auto& table = functionality_table();
  auto it = table.find(to_lower(label));
  record.values.functionality = it != table.end() ? it->second : "general use";
  record.values.caption =
      record.values.color.empty() ? "a " + label : "a " + record.values.color + " " + label;
  return record;
}

std::string OfflineTextModel::complete_text(std::string_view prompt, std::string_view context) {
  const auto task = prompts::task_of(prompt);
  if (task == prompts::kRelationEnrichment) return fake_enrichment(parse_context(context));
  if (task == prompts::kGrounding) return fake_grounding(parse_context(context));
  if (task == prompts::kAggregateAttributes) return fake_aggregation(parse_context(context));
  throw ServiceError(ServiceError::Kind::kNoHandler,
                     "no fake handler for task '" + (task.empty() ? std::string("<untagged>") : task) + "'");
}

std::vector<double> HashingEmbeddingModel::embed_text(std::string_view text) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw EmptyInput("cannot embed empty text");
  std::vector<double> v(dimension_, 0.0);
  for (const auto& token : tokens) {
    const auto h = fnv1a64(token);
    v[h % dimension_] += ((h >> 32) & 1U) ? 1.0 : -1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm == 0.0) {
    // Every token cancelled out; fall back to a single bucket for the whole text.
    v[fnv1a64(join(tokens, " ")) % dimension_] = 1.0;
    norm = 1.0;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::string HashingEmbeddingModel::name() const {
  return "feature-hash-" + std::to_string(dimension_);
}

std::size_t caption_token_overlap(std::string_view query, std::string_view caption) {
  static const std::set<std::string, std::less<>> kArticles{"a", "an", "the"};
  std::set<std::string> query_tokens;
  for (auto& t : tokenize(query)) {
    if (!kArticles.contains(t)) query_tokens.insert(std::move(t));
  }
  const auto caption_tokens = tokenize(caption);
  const std::set<std::string> caption_set(caption_tokens.begin(), caption_tokens.end());
  std::size_t overlap = 0;
  for (const auto& t : query_tokens) overlap += caption_set.contains(t) ? 1 : 0;
  return overlap;
}

}  // namespace vsg
