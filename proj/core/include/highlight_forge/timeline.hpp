#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "highlight_forge/detector.hpp"
#include "highlight_forge/event_class.hpp"
#include "highlight_forge/frame_sampler.hpp"

namespace hforge {

/// One confident event inside a record. Confidence is in percent here,
/// matching the metadata file.
struct TimelineEvent {
  EventClass label;
  double confidence_pct;

  friend bool operator==(const TimelineEvent&, const TimelineEvent&) = default;
};

/// Everything confidently detected in the frame sampled at `timestamp_s`.
struct EventRecord {
  Seconds timestamp_s = 0;
  std::vector<TimelineEvent> events;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Records in strictly increasing timestamp order; seconds with nothing
/// confident are absent.
struct EventTimeline {
  std::vector<EventRecord> records;

  friend bool operator==(const EventTimeline&, const EventTimeline&) = default;
};

/// "86-\t[('foul', 92.54742860794067)]" -- no trailing newline.
std::string format_record(const EventRecord& record);

/// Accepts any run of spaces/tabs where the writer puts a tab or a single
/// space. Throws ParseError (with column) on grammar violations and on an
/// empty "[]" list, UnknownLabelError on labels outside the four classes.
EventRecord parse_line(std::string_view line);

/// Whole metadata file: one record per line, LF endings, no header.
std::string format_timeline(const EventTimeline& timeline);

/// Blank lines are skipped. Errors carry the 1-based line number. Throws
/// ParseError when timestamps are not strictly increasing.
EventTimeline parse_timeline(std::string_view text);

/// filter_confident() per frame, then one record per non-empty frame with
/// confidences scaled to percent. Frames must be in timestamp order; a
/// repeated timestamp throws InvalidArgument.
EventTimeline build_timeline(const std::vector<FrameDetections>& frames, double threshold);

}  // namespace hforge
