#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "highlight_forge/clip_planner.hpp"
#include "highlight_forge/event_class.hpp"
#include "highlight_forge/frame_sampler.hpp"
#include "highlight_forge/timeline.hpp"

namespace hforge {

struct TimedEvent {
  Seconds timestamp_s;
  EventClass label;

  friend bool operator==(const TimedEvent&, const TimedEvent&) = default;
};

using GroundTruthEvent = TimedEvent;
using PredictedEvent = TimedEvent;

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t predicted() const noexcept { return tp + fp; }
  std::size_t actual() const noexcept { return tp + fn; }
  /// 0 when nothing was predicted.
  double precision() const noexcept;
  /// 0 when there was nothing to find.
  double recall() const noexcept;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct MatchedPair {
  TimedEvent truth;
  TimedEvent predicted;
};

struct EvalReport {
  std::array<ClassCounts, 4> per_class{};  ///< indexed by EventClass
  std::vector<MatchedPair> matches;

  const ClassCounts& operator[](EventClass label) const noexcept {
    return per_class[static_cast<std::size_t>(label)];
  }
  ClassCounts totals() const noexcept;
};

/// Per-class one-to-one matching with |dt| <= tolerance_s. Truth events are
/// taken in time order and each claims the earliest unclaimed prediction of
/// the same class inside its window. Because every window has the same
/// width this yields a maximum matching.
EvalReport match_events(const std::vector<PredictedEvent>& predicted,
                        const std::vector<GroundTruthEvent>& truth, Seconds tolerance_s);

/// One prediction per (record, distinct label).
std::vector<PredictedEvent> predictions_from_timeline(const EventTimeline& timeline);

/// One prediction per clip: its overlay label at the overlay timestamp.
std::vector<PredictedEvent> predictions_from_cutlist(const CutList& cutlist);

/// Headerless "timestamp_s,label" lines. "shot at goal" / "shots at goal"
/// are accepted as goal.
std::vector<GroundTruthEvent> parse_ground_truth(std::string_view text);

/// Fixed-width table, one row per class plus a totals row.
std::string report_table(const EvalReport& report);

std::string report_json(const EvalReport& report, Seconds tolerance_s);

}  // namespace hforge
