#include "highlight_forge/clip_planner.hpp"

#include <algorithm>

#include "json.hpp"

#include "highlight_forge/errors.hpp"

namespace hforge {

void validate(const PlannerConfig& config) {
  if (config.lead_s < 0 || config.tail_s < 0 || config.merge_gap_s < 0) {
    throw InvalidArgument("planner lead, tail and merge gap must be >= 0");
  }
  if (config.lead_s + config.tail_s == 0) {
    throw InvalidArgument("planner lead + tail must be at least one second");
  }
}

std::pair<Seconds, Seconds> pad_event(Seconds t, const PlannerConfig& config,
                                      Seconds duration_s) {
  validate(config);
  if (duration_s < 1) throw InvalidArgument("video duration must be positive");
  if (t < 0 || t > duration_s) {
    throw InvalidArgument("event at " + std::to_string(t) + " s lies outside the video");
  }
  Seconds start = std::max<Seconds>(0, t - config.lead_s);
  Seconds end = std::min(duration_s, t + config.tail_s);
  if (start == end) {
    if (end < duration_s) {
      ++end;
    } else {
      --start;
    }
  }
  return {start, end};
}

namespace {

SourceEvent best_of(const std::vector<SourceEvent>& events) {
  // Events are appended in time order, so the first maximum is the earliest.
  return *std::max_element(events.begin(), events.end(),
                           [](const SourceEvent& a, const SourceEvent& b) {
                             return a.confidence_pct < b.confidence_pct;
                           });
}

}  // namespace

CutList merge_windows(const EventTimeline& timeline, const PlannerConfig& config,
                      Seconds duration_s) {
  validate(config);
  CutList cutlist{{}, duration_s};
  if (timeline.records.empty()) return cutlist;

  std::vector<EventRecord> records = timeline.records;
  std::stable_sort(records.begin(), records.end(),
                   [](const EventRecord& a, const EventRecord& b) {
                     return a.timestamp_s < b.timestamp_s;
                   });

  auto close = [&cutlist](ClipWindow& clip) {
    clip.overlay = best_of(clip.source_events);
    cutlist.clips.push_back(std::move(clip));
  };

  ClipWindow open{0, 0, {}, {}};
  bool have_open = false;
  for (const auto& record : records) {
    if (record.events.empty()) {
      throw InvalidArgument("timeline record at " + std::to_string(record.timestamp_s) +
                            " s has no events");
    }
    const auto [start, end] = pad_event(record.timestamp_s, config, duration_s);
    if (have_open && start <= open.end_s + config.merge_gap_s) {
      open.end_s = std::max(open.end_s, end);
    } else {
      if (have_open) close(open);
      open = ClipWindow{start, end, {}, {}};
      have_open = true;
    }
    for (const auto& event : record.events) {
      open.source_events.push_back({record.timestamp_s, event.label, event.confidence_pct});
    }
  }
  close(open);
  return cutlist;
}

Seconds total_highlight_duration(const CutList& cutlist) noexcept {
  Seconds total = 0;
  for (const auto& clip : cutlist.clips) total += clip.duration();
  return total;
}

namespace {

using nlohmann::ordered_json;

ordered_json event_json(const SourceEvent& event) {
  ordered_json j;
  j["timestamp_s"] = event.timestamp_s;
  j["label"] = std::string(canonical_name(event.label));
  j["confidence_pct"] = event.confidence_pct;
  return j;
}

SourceEvent event_from_json(const nlohmann::json& j) {
  auto label = try_parse_event_class(j.at("label").get<std::string>());
  if (!label) throw UnknownLabelError(j.at("label").get<std::string>());
  return SourceEvent{j.at("timestamp_s").get<Seconds>(), *label,
                     j.at("confidence_pct").get<double>()};
}

}  // namespace

std::string cutlist_to_json(const CutList& cutlist) {
  ordered_json doc;
  doc["clips"] = ordered_json::array();
  for (const auto& clip : cutlist.clips) {
    ordered_json c;
    c["start_s"] = clip.start_s;
    c["end_s"] = clip.end_s;
    c["label"] = std::string(canonical_name(clip.overlay.label));
    c["confidence_pct"] = clip.overlay.confidence_pct;
    c["overlay_timestamp_s"] = clip.overlay.timestamp_s;
    c["events"] = ordered_json::array();
    for (const auto& event : clip.source_events) c["events"].push_back(event_json(event));
    doc["clips"].push_back(std::move(c));
  }
  doc["video_duration_s"] = cutlist.video_duration_s;
  return doc.dump(2) + "\n";
}

CutList cutlist_from_json(std::string_view json_text) {
  CutList cutlist;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    cutlist.video_duration_s = doc.at("video_duration_s").get<Seconds>();
    for (const auto& c : doc.at("clips")) {
      ClipWindow clip{c.at("start_s").get<Seconds>(), c.at("end_s").get<Seconds>(), {}, {}};
      for (const auto& e : c.at("events")) clip.source_events.push_back(event_from_json(e));
      if (clip.source_events.empty()) throw InvalidArgument("clip without events");
      auto label = try_parse_event_class(c.at("label").get<std::string>());
      if (!label) throw UnknownLabelError(c.at("label").get<std::string>());
      const Seconds overlay_t = c.contains("overlay_timestamp_s")
                                    ? c.at("overlay_timestamp_s").get<Seconds>()
                                    : best_of(clip.source_events).timestamp_s;
      clip.overlay = SourceEvent{overlay_t, *label, c.at("confidence_pct").get<double>()};
      cutlist.clips.push_back(std::move(clip));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed cut list: ") + e.what());
  }

  Seconds previous_end = -1;
  for (const auto& clip : cutlist.clips) {
    if (clip.start_s < 0 || clip.start_s >= clip.end_s ||
        clip.end_s > cutlist.video_duration_s) {
      throw InvalidArgument("cut list clip [" + std::to_string(clip.start_s) + ", " +
                            std::to_string(clip.end_s) + "] is out of range");
    }
    if (clip.start_s <= previous_end) {
      throw InvalidArgument("cut list clips overlap or are out of order");
    }
    previous_end = clip.end_s;
  }
  return cutlist;
}

}  // namespace hforge
