#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "highlight_forge/event_class.hpp"
#include "highlight_forge/frame_sampler.hpp"
#include "highlight_forge/timeline.hpp"

namespace hforge {

/// Padding around each event and how close two padded windows must be to
/// share a clip. Defaults: 5 s before, 5 s after, merge on touch/overlap.
struct PlannerConfig {
  Seconds lead_s = 5;
  Seconds tail_s = 5;
  Seconds merge_gap_s = 0;
};

/// Throws InvalidArgument on negative values or lead_s + tail_s == 0.
void validate(const PlannerConfig& config);

struct SourceEvent {
  Seconds timestamp_s;
  EventClass label;
  double confidence_pct;

  friend bool operator==(const SourceEvent&, const SourceEvent&) = default;
};

/// One highlight clip. `overlay` is the most confident of `source_events`
/// (earliest wins a tie) and is stamped on every frame of the clip.
struct ClipWindow {
  Seconds start_s;
  Seconds end_s;
  std::vector<SourceEvent> source_events;
  SourceEvent overlay;

  Seconds duration() const noexcept { return end_s - start_s; }

  friend bool operator==(const ClipWindow&, const ClipWindow&) = default;
};

/// Sorted, pairwise disjoint clips inside [0, video_duration_s].
struct CutList {
  std::vector<ClipWindow> clips;
  Seconds video_duration_s = 0;

  friend bool operator==(const CutList&, const CutList&) = default;
};

/// [max(0, t - lead), min(duration, t + tail)]. If clamping would leave an
/// empty window it is widened by one second on the side that still has room.
std::pair<Seconds, Seconds> pad_event(Seconds t, const PlannerConfig& config,
                                      Seconds duration_s);

/// Pads every record and sweeps them in time order, extending the open clip
/// while the next window starts no later than clip end + merge_gap_s.
CutList merge_windows(const EventTimeline& timeline, const PlannerConfig& config,
                      Seconds duration_s);

Seconds total_highlight_duration(const CutList& cutlist) noexcept;

/// {"clips":[{"start_s","end_s","label","confidence_pct","events":[...]}],
///  "video_duration_s"}
std::string cutlist_to_json(const CutList& cutlist);

/// Throws ParseError on malformed documents and InvalidArgument when the
/// clips break the CutList invariants.
CutList cutlist_from_json(std::string_view json_text);

}  // namespace hforge
