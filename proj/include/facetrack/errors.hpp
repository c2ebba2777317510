#pragma once

#include <stdexcept>
#include <string>

namespace facetrack {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  invalid_state,
  parse,
  io,
  config,
  singular_update,
  not_psd,
  numeric,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct InvalidArgumentError : Error {
  explicit InvalidArgumentError(const std::string& msg)
      : Error(ErrorCode::invalid_argument, msg) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& msg)
      : Error(ErrorCode::dimension_mismatch, msg) {}
};

// Non-finite values where finite input is required.
struct InvalidStateError : Error {
  explicit InvalidStateError(const std::string& msg)
      : Error(ErrorCode::invalid_state, msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(ErrorCode::parse, msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(ErrorCode::io, msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(ErrorCode::config, msg) {}
};

// Innovation covariance not invertible (or condition estimate above 1e12).
struct SingularUpdateError : Error {
  explicit SingularUpdateError(const std::string& msg)
      : Error(ErrorCode::singular_update, msg) {}
};

// Covariance not positive semi-definite even after jitter.
struct NotPsdError : Error {
  NotPsdError(const std::string& msg, double smallest_eigenvalue)
      : Error(ErrorCode::not_psd, msg), smallest_eigenvalue(smallest_eigenvalue) {}
  double smallest_eigenvalue;
};

// Non-finite values produced during filtering.
struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error(ErrorCode::numeric, msg) {}
};

}  // namespace facetrack
