#include "vsg/live_clients.hpp"

#include <cmath>

#include "vsg/errors.hpp"
#include "vsg/image_io.hpp"
#include "vsg/prompts.hpp"
#include "vsg/text.hpp"

namespace vsg {
namespace {

using json = nlohmann::json;

json parse_reply_object(const std::string& reply, const char* what) {
  const auto body = extract_json_object(reply);
  json doc = json::parse(body, nullptr, false);
  if (body.empty() || doc.is_discarded() || !doc.is_object()) {
    throw ResponseParseError(std::string(what) + " reply is not a JSON object", reply);
  }
  return doc;
}

}  // namespace

ChatService::ChatService(std::shared_ptr<Transport> transport, ClientConfig config, RetryPolicy retry)
    : transport_(std::move(transport)),
      config_(std::move(config)),
      retry_(std::move(retry)),
      slots_(config_.max_concurrent) {}

HttpResponse ChatService::send(const std::string& path, const std::string& body) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{slots_};
  return with_retries(retry_, [&] { return transport_->post(path, body); });
}

std::string ChatService::chat(const std::string& text, const std::vector<RasterImage>& images) {
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", text}});
  for (const auto& image : images) {
    content.push_back({{"type", "image_url"},
                       {"image_url", {{"url", "data:image/png;base64," + base64_encode(encode_png(image))}}}});
  }
  const json request = {
      {"model", config_.chat_model},
      {"temperature", 0},
      {"messages", json::array({{{"role", "user"}, {"content", content}}})},
  };
  const auto response = send("/chat/completions", request.dump());
  const json doc = json::parse(response.body, nullptr, false);
  if (doc.is_discarded()) throw ResponseParseError("chat response is not JSON", response.body);
  try {
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw ResponseParseError("chat response lacks choices[0].message.content", response.body);
  }
}

std::vector<double> ChatService::embed(const std::string& text) {
  const json request = {{"model", config_.embedding_model}, {"input", text}};
  const auto response = send("/embeddings", request.dump());
  const json doc = json::parse(response.body, nullptr, false);
  if (doc.is_discarded()) throw ResponseParseError("embedding response is not JSON", response.body);
  std::vector<double> v;
  try {
    v = doc.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ResponseParseError("embedding response lacks data[0].embedding", response.body);
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (v.empty() || norm == 0.0) throw ResponseParseError("embedding is empty or zero", response.body);
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

FrontViewJudgment parse_front_view_reply(const std::string& reply, std::size_t view_count) {
  const auto doc = parse_reply_object(reply, "front-view");
  auto it = doc.find("confidences");
  if (it == doc.end() || !it->is_array()) {
    throw ResponseParseError("front-view reply lacks a confidences array", reply);
  }
  if (it->size() != view_count) {
    throw ResponseParseError("front-view reply has " + std::to_string(it->size()) +
                                 " confidences for " + std::to_string(view_count) + " views",
                             reply);
  }
  std::vector<double> confidences;
  for (const auto& c : *it) {
    if (!c.is_number()) throw ResponseParseError("non-numeric confidence", reply);
    confidences.push_back(c.get<double>());
  }
  return FrontViewJudgment::from_confidences(std::move(confidences));
}

FrontViewJudgment LiveVisionModel::identify_front_view(const RasterImage* reference,
                                                       std::span<const RasterImage> views,
                                                       std::string_view class_label) {
  if (views.empty()) throw EmptyInput("no views to judge");
  std::vector<RasterImage> images;
  if (reference) images.push_back(*reference);
  images.insert(images.end(), views.begin(), views.end());
  const auto prompt = prompts::render(
      prompts::kFrontView,
      {{"class_label", std::string(class_label)},
       {"view_count", std::to_string(views.size())},
       {"last_index", std::to_string(views.size() - 1)},
       {"reference_note", reference ? "The first image is the reference; the rendered views follow it."
                                    : "No reference image is available; judge from the usual "
                                      "appearance of the class. All images are rendered views."}});
  return parse_front_view_reply(service_->chat(prompt, images), views.size());
}

ViewAttributes LiveVisionModel::extract_view_attributes(const RasterImage& view,
                                                        std::string_view class_label) {
  const auto prompt =
      prompts::render(prompts::kViewAttributes, {{"class_label", std::string(class_label)}});
  const auto reply = service_->chat(prompt, {view});
  return view_attributes_from_json(parse_reply_object(reply, "attribute"));
}

std::string LiveTextModel::complete_text(std::string_view prompt, std::string_view context) {
  std::string text(prompt);
  if (!context.empty()) {
    text += "\n\nContext:\n";
    text += context;
  }
  return service_->chat(text, {});
}

std::vector<double> LiveEmbeddingModel::embed_text(std::string_view text) {
  if (text.empty()) throw EmptyInput("cannot embed empty text");
  return service_->embed(std::string(text));
}

std::string LiveEmbeddingModel::name() const { return "live:" + service_->config().embedding_model; }

}  // namespace vsg
