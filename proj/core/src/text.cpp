#include "highlight_forge/text.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace hforge::text {

std::string format_shortest(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";

  char buf[64];
  const double magnitude = std::fabs(value);
  const bool fixed = magnitude == 0.0 || (magnitude >= 1e-4 && magnitude < 1e16);
  auto [end, ec] = std::to_chars(
      buf, buf + sizeof(buf), value,
      fixed ? std::chars_format::fixed : std::chars_format::scientific);
  std::string out(buf, end);
  if (fixed) {
    if (out.find('.') == std::string::npos) out += ".0";
    return out;
  }
  // to_chars writes "1e-05"; Python also pads the exponent to two digits.
  const auto e = out.find('e');
  std::string mantissa = out.substr(0, e);
  std::string exponent = out.substr(e + 1);
  const char sign = exponent.front() == '-' ? '-' : '+';
  if (exponent.front() == '-' || exponent.front() == '+') exponent.erase(0, 1);
  if (exponent.size() < 2) exponent.insert(0, "0");
  return mantissa + "e" + sign + exponent;
}

std::optional<double> parse_double(std::string_view text) noexcept {
  if (text.empty()) return std::nullopt;
  const char* first = text.data();
  if (*first == '+') ++first;
  double value = 0;
  auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<std::int64_t> parse_int(std::string_view text) noexcept {
  if (text.empty()) return std::nullopt;
  const char* first = text.data();
  if (*first == '+') ++first;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<std::int64_t> parse_digits(std::string_view text) noexcept {
  if (text.empty() || text.front() < '0' || text.front() > '9') return std::nullopt;
  return parse_int(text);
}

std::string_view trim(std::string_view text) noexcept {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  if (text.empty()) return out;
  out = split(text, '\n');
  if (text.back() == '\n') out.pop_back();
  for (auto& line : out) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  }
  return out;
}

}  // namespace hforge::text
