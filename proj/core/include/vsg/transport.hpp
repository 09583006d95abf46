#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>

namespace vsg {

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// JSON-over-HTTP POST. Implementations throw ServiceError for timeouts and
/// connection failures; non-2xx statuses are returned, not thrown.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const std::string& path, const std::string& json_body) = 0;
};

class HttpTransport final : public Transport {
 public:
  HttpTransport(std::string base_url, std::string api_key, std::chrono::milliseconds timeout);
  HttpResponse post(const std::string& path, const std::string& json_body) override;

 private:
  std::string scheme_host_port_;
  std::string base_path_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

/// Key under which a request is recorded: SHA-256 of path and body.
std::string request_key(const std::string& path, const std::string& json_body);

/// Serves responses previously captured by RecordingTransport.
class ReplayTransport final : public Transport {
 public:
  explicit ReplayTransport(std::filesystem::path directory) : directory_(std::move(directory)) {}
  HttpResponse post(const std::string& path, const std::string& json_body) override;

 private:
  std::filesystem::path directory_;
};

class RecordingTransport final : public Transport {
 public:
  RecordingTransport(std::shared_ptr<Transport> inner, std::filesystem::path directory);
  HttpResponse post(const std::string& path, const std::string& json_body) override;

 private:
  std::shared_ptr<Transport> inner_;
  std::filesystem::path directory_;
};

/// Exponential backoff: delay before retry n (1-based) is
/// base * factor^(n-1) scaled by a jitter factor in [1 - jitter, 1 + jitter].
struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;
  double jitter = 0.25;
  std::uint64_t seed = 0x5eed;
  std::function<void(std::chrono::milliseconds)> sleep;

  std::chrono::milliseconds delay_for(int retry, double unit_random) const;
};

/// Calls `attempt` until it succeeds, a non-retryable error escapes, or
/// max_retries + 1 attempts have failed. Only retryable ServiceErrors are retried.
HttpResponse with_retries(const RetryPolicy& policy, const std::function<HttpResponse()>& attempt);

}  // namespace vsg
