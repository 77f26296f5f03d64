#include "highlight_forge/errors.hpp"

namespace hforge {

const char* to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::invalid_argument: return "invalid argument";
    case ErrorCategory::geometry: return "geometry";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::unknown_label: return "unknown label";
    case ErrorCategory::config: return "config";
    case ErrorCategory::environment: return "environment";
    case ErrorCategory::transport: return "transport";
    case ErrorCategory::protocol: return "protocol";
    case ErrorCategory::execution: return "execution";
  }
  return "unknown";
}

namespace {

std::string with_position(const std::string& what, std::size_t line,
                          std::size_t column) {
  if (line == 0) return what;
  std::string out = "line " + std::to_string(line);
  if (column != 0) out += ", column " + std::to_string(column);
  return out + ": " + what;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line,
                       std::size_t column)
    : Error(ErrorCategory::parse, with_position(what, line, column)),
      line_(line),
      column_(column) {}

UnknownLabelError::UnknownLabelError(const std::string& label)
    : Error(ErrorCategory::unknown_label, "unknown event label '" + label + "'"),
      label_(label) {}

}  // namespace hforge
