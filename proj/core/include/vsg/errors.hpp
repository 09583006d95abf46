#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vsg {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Geometric input that has no well-defined answer (coincident points, zero vectors).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& message, std::string path)
      : Error(message + ": " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Malformed input file. `location` is "line N", "byte N", or a JSON pointer.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string location)
      : Error(location.empty() ? message : message + " (at " + location + ")"),
        location_(std::move(location)) {}
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

/// A document that parses but does not match the graph schema.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& message, std::string path)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class MissingFront : public Error {
 public:
  explicit MissingFront(int object_id)
      : Error("object " + std::to_string(object_id) + " has no front direction"),
        object_id_(object_id) {}
  int object_id() const noexcept { return object_id_; }

 private:
  int object_id_;
};

/// Failure talking to a model service after retries are exhausted.
class ServiceError : public Error {
 public:
  enum class Kind {
    kTimeout,
    kConnection,
    kHttpStatus,    // 429 or 5xx; retried
    kRejected,      // other non-2xx; not retried
    kNoHandler,     // offline fake has no handler for the task
    kNoRecording,   // replay mode has no response for the request
  };

  ServiceError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }
  bool retryable() const noexcept {
    return kind_ == Kind::kTimeout || kind_ == Kind::kConnection || kind_ == Kind::kHttpStatus;
  }

 private:
  Kind kind_;
};

/// Model output that could not be interpreted. Never retried.
class ResponseParseError : public Error {
 public:
  ResponseParseError(const std::string& message, std::string raw)
      : Error(message), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

class UnresolvableAnswer : public Error {
 public:
  explicit UnresolvableAnswer(std::string raw)
      : Error("model answer does not name any graph node"), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

/// Stage failure inside the pipeline, tagged with the object it concerns.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, int object_id, const std::string& cause, bool service_failure)
      : Error(stage + " failed for object " + std::to_string(object_id) + ": " + cause),
        stage_(std::move(stage)),
        object_id_(object_id),
        service_failure_(service_failure) {}
  const std::string& stage() const noexcept { return stage_; }
  int object_id() const noexcept { return object_id_; }
  /// True when the underlying cause was a model-service failure.
  bool service_failure() const noexcept { return service_failure_; }

 private:
  std::string stage_;
  int object_id_;
  bool service_failure_;
};

}  // namespace vsg
