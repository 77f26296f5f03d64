#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace hforge {

/// The four highlight-worthy events the detector is trained on.
enum class EventClass {
  foul,
  corner_kick,
  goal,
  penalty_kick,
};

inline constexpr std::array<EventClass, 4> kAllEventClasses = {
    EventClass::foul, EventClass::corner_kick, EventClass::goal,
    EventClass::penalty_kick};

/// Canonical spelling used in every file the pipeline writes:
/// "foul", "Corner kick", "goal", "penalty kick".
std::string_view canonical_name(EventClass label) noexcept;

/// Case-insensitive lookup against the canonical names.
std::optional<EventClass> try_parse_event_class(std::string_view text) noexcept;

/// Throws UnknownLabelError for anything outside the closed set.
EventClass parse_event_class(std::string_view text);

}  // namespace hforge
