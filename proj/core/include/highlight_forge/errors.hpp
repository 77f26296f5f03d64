#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hforge {

/// Broad failure families. The CLI maps each one to its own exit status.
enum class ErrorCategory {
  invalid_argument,
  geometry,
  parse,
  unknown_label,
  config,
  environment,
  transport,
  protocol,
  execution,
};

const char* to_string(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCategory::invalid_argument, what) {}
};

/// A box or image size that breaks its invariants.
class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& what)
      : Error(ErrorCategory::geometry, what) {}
};

/// Malformed text input. `line` and `column` are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0,
             std::size_t column = 0);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownLabelError : public Error {
 public:
  explicit UnknownLabelError(const std::string& label);

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCategory::config, what) {}
};

/// A required external tool or resource is missing.
class EnvironmentError : public Error {
 public:
  explicit EnvironmentError(const std::string& what)
      : Error(ErrorCategory::environment, what) {}
};

/// The detector backend could not be reached. Retryable.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& what)
      : Error(ErrorCategory::transport, what) {}
};

/// The detector backend answered with something that breaks the wire contract.
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what)
      : Error(ErrorCategory::protocol, what) {}
};

class ExecutionError : public Error {
 public:
  explicit ExecutionError(const std::string& what)
      : Error(ErrorCategory::execution, what) {}
};

}  // namespace hforge
