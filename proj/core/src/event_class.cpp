#include "highlight_forge/event_class.hpp"

#include <algorithm>
#include <cctype>

#include "highlight_forge/errors.hpp"

namespace hforge {

std::string_view canonical_name(EventClass label) noexcept {
  switch (label) {
    case EventClass::foul: return "foul";
    case EventClass::corner_kick: return "Corner kick";
    case EventClass::goal: return "goal";
    case EventClass::penalty_kick: return "penalty kick";
  }
  return "foul";
}

namespace {

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::optional<EventClass> try_parse_event_class(std::string_view text) noexcept {
  for (EventClass label : kAllEventClasses) {
    if (iequals(text, canonical_name(label))) return label;
  }
  return std::nullopt;
}

EventClass parse_event_class(std::string_view text) {
  if (auto label = try_parse_event_class(text)) return *label;
  throw UnknownLabelError(std::string(text));
}

}  // namespace hforge
