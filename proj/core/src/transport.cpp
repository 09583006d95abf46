#include "vsg/transport.hpp"

#include <httplib.h>

#include <cmath>
#include <fstream>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "vsg/errors.hpp"
#include "vsg/hashing.hpp"

namespace vsg {

HttpTransport::HttpTransport(std::string base_url, std::string api_key,
                             std::chrono::milliseconds timeout)
    : api_key_(std::move(api_key)), timeout_(timeout) {
  const auto scheme_end = base_url.find("://");
  const auto path_start = base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = base_url;
  } else {
    scheme_host_port_ = base_url.substr(0, path_start);
    base_path_ = base_url.substr(path_start);
  }
  while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
}

HttpResponse HttpTransport::post(const std::string& path, const std::string& json_body) {
  httplib::Client client(scheme_host_port_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto result = client.Post(base_path_ + path, headers, json_body, "application/json");
  if (!result) {
    const auto err = result.error();
    const auto kind = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
                          ? ServiceError::Kind::kTimeout
                          : ServiceError::Kind::kConnection;
    throw ServiceError(kind, "request to " + scheme_host_port_ + base_path_ + path +
                                 " failed: " + httplib::to_string(err));
  }
  return HttpResponse{result->status, result->body};
}

std::string request_key(const std::string& path, const std::string& json_body) {
  return sha256_hex(path + "\n" + json_body);
}

HttpResponse ReplayTransport::post(const std::string& path, const std::string& json_body) {
  const auto file = directory_ / (request_key(path, json_body) + ".json");
  std::ifstream in(file);
  if (!in) {
    throw ServiceError(ServiceError::Kind::kNoRecording, "no recorded response: " + file.string());
  }
  const auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.contains("status") || !doc.contains("body")) {
    throw ParseError("malformed recording", file.string());
  }
  return HttpResponse{doc.at("status").get<int>(), doc.at("body").get<std::string>()};
}

RecordingTransport::RecordingTransport(std::shared_ptr<Transport> inner, std::filesystem::path directory)
    : inner_(std::move(inner)), directory_(std::move(directory)) {
  std::filesystem::create_directories(directory_);
}

HttpResponse RecordingTransport::post(const std::string& path, const std::string& json_body) {
  auto response = inner_->post(path, json_body);
  const auto file = directory_ / (request_key(path, json_body) + ".json");
  std::ofstream out(file);
  if (!out) throw IoError("cannot write recording", file.string());
  out << nlohmann::json{{"path", path}, {"status", response.status}, {"body", response.body}}.dump(2)
      << '\n';
  return response;
}

std::chrono::milliseconds RetryPolicy::delay_for(int retry, double unit_random) const {
  const double scale = 1.0 - jitter + 2.0 * jitter * unit_random;
  const double ms = static_cast<double>(base_delay.count()) * std::pow(factor, retry - 1) * scale;
  return std::chrono::milliseconds(static_cast<long>(std::llround(ms)));
}

HttpResponse with_retries(const RetryPolicy& policy, const std::function<HttpResponse()>& attempt) {
  std::mt19937_64 rng(policy.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sleep = policy.sleep ? policy.sleep
                            : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };

  for (int tried = 1;; ++tried) {
    try {
      auto response = attempt();
      if (response.status >= 200 && response.status < 300) return response;
      const bool retryable = response.status == 429 || response.status >= 500;
      const auto message = "service returned HTTP " + std::to_string(response.status) + ": " +
                           response.body.substr(0, 200);
      if (!retryable) throw ServiceError(ServiceError::Kind::kRejected, message);
      throw ServiceError(ServiceError::Kind::kHttpStatus, message);
    } catch (const ServiceError& e) {
      if (!e.retryable()) throw;
      if (tried > policy.max_retries) {
        throw ServiceError(e.kind(), std::string(e.what()) + " (after " + std::to_string(tried) +
                                         " attempts)");
      }
    }
    sleep(policy.delay_for(tried, unit(rng)));
  }
}

}  // namespace vsg
