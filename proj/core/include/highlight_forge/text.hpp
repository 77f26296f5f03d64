#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the text codecs.
namespace hforge::text {

/// Shortest decimal that parses back to exactly `value`, spelled the way
/// Python's repr() spells floats ("92.54742860794067", "100.0", "1e-05").
std::string format_shortest(double value);

/// Whole-string parse; nullopt on trailing garbage, empty input or overflow.
std::optional<double> parse_double(std::string_view text) noexcept;
std::optional<std::int64_t> parse_int(std::string_view text) noexcept;

/// Unsigned decimal digits only (no sign, no whitespace).
std::optional<std::int64_t> parse_digits(std::string_view text) noexcept;

std::string_view trim(std::string_view text) noexcept;

std::vector<std::string_view> split(std::string_view text, char sep);

/// Splits on '\n', dropping one trailing '\r' per line. A trailing newline
/// does not produce an extra empty line.
std::vector<std::string_view> lines(std::string_view text);

}  // namespace hforge::text
