#pragma once

#include <memory>
#include <semaphore>
#include <string>
#include <vector>

#include "vsg/clients.hpp"
#include "vsg/transport.hpp"

namespace vsg {

/// OpenAI-compatible chat and embedding calls with retry and a bound on
/// concurrent in-flight requests.
class ChatService {
 public:
  ChatService(std::shared_ptr<Transport> transport, ClientConfig config, RetryPolicy retry);

  /// Sends one user message (text plus PNG images) and returns the reply text.
  std::string chat(const std::string& text, const std::vector<RasterImage>& images);
  std::vector<double> embed(const std::string& text);

  const ClientConfig& config() const { return config_; }

 private:
  HttpResponse send(const std::string& path, const std::string& body);

  std::shared_ptr<Transport> transport_;
  ClientConfig config_;
  RetryPolicy retry_;
  std::counting_semaphore<> slots_;
};

class LiveVisionModel final : public VisionModel {
 public:
  explicit LiveVisionModel(std::shared_ptr<ChatService> service) : service_(std::move(service)) {}
  FrontViewJudgment identify_front_view(const RasterImage* reference,
                                        std::span<const RasterImage> views,
                                        std::string_view class_label) override;
  ViewAttributes extract_view_attributes(const RasterImage& view,
                                         std::string_view class_label) override;

 private:
  std::shared_ptr<ChatService> service_;
};

class LiveTextModel final : public TextModel {
 public:
  explicit LiveTextModel(std::shared_ptr<ChatService> service) : service_(std::move(service)) {}
  std::string complete_text(std::string_view prompt, std::string_view context) override;

 private:
  std::shared_ptr<ChatService> service_;
};

class LiveEmbeddingModel final : public EmbeddingModel {
 public:
  explicit LiveEmbeddingModel(std::shared_ptr<ChatService> service) : service_(std::move(service)) {}
  std::vector<double> embed_text(std::string_view text) override;
  std::string name() const override;

 private:
  std::shared_ptr<ChatService> service_;
};

/// Parses a front-view reply of the form {"confidences": [...]} for `view_count` views.
FrontViewJudgment parse_front_view_reply(const std::string& reply, std::size_t view_count);

}  // namespace vsg
