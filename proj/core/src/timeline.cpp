#include "highlight_forge/timeline.hpp"

#include <algorithm>
#include <charconv>

#include "highlight_forge/errors.hpp"
#include "highlight_forge/text.hpp"

namespace hforge {

std::string format_record(const EventRecord& record) {
  std::string out = std::to_string(record.timestamp_s);
  out += "-\t[";
  bool first = true;
  for (const auto& event : record.events) {
    if (!first) out += ", ";
    first = false;
    out += "('";
    out += canonical_name(event.label);
    out += "', ";
    out += text::format_shortest(event.confidence_pct);
    out += ')';
  }
  out += ']';
  return out;
}

namespace {

/// Cursor over one metadata line; columns reported 1-based.
class LineScanner {
 public:
  explicit LineScanner(std::string_view line) : line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, 0, pos_ + 1);
  }

  bool done() const { return pos_ >= line_.size(); }
  char peek() const { return done() ? '\0' : line_[pos_]; }

  void skip_blanks() {
    while (!done() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
  }

  void expect(std::string_view token) {
    if (line_.substr(pos_, token.size()) != token) {
      fail("expected \"" + std::string(token) + "\"");
    }
    pos_ += token.size();
  }

  Seconds integer() {
    const std::size_t start = pos_;
    while (!done() && line_[pos_] >= '0' && line_[pos_] <= '9') ++pos_;
    if (start == pos_) fail("expected a timestamp in whole seconds");
    auto value = text::parse_digits(line_.substr(start, pos_ - start));
    if (!value) {
      pos_ = start;
      fail("timestamp out of range");
    }
    return *value;
  }

  double number() {
    double value = 0;
    const char* first = line_.data() + pos_;
    const char* last = line_.data() + line_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr == first) fail("expected a confidence value");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  EventClass label() {
    const std::size_t start = pos_;
    const auto close = line_.find('\'', pos_);
    if (close == std::string_view::npos) fail("unterminated label");
    pos_ = close;
    const auto text = line_.substr(start, close - start);
    if (text.empty()) {
      pos_ = start;
      fail("empty label");
    }
    return parse_event_class(text);
  }

 private:
  std::string_view line_;
  std::size_t pos_ = 0;
};

}  // namespace

EventRecord parse_line(std::string_view line) {
  LineScanner in(line);
  EventRecord record;
  record.timestamp_s = in.integer();
  in.expect("-");
  in.skip_blanks();
  in.expect("[");
  if (in.peek() == ']') in.fail("record has no events");
  while (true) {
    in.expect("('");
    const EventClass label = in.label();
    in.expect("',");
    in.skip_blanks();
    const double pct = in.number();
    if (!(pct >= 0.0 && pct <= 100.0)) in.fail("confidence outside [0, 100]");
    in.expect(")");
    record.events.push_back({label, pct});
    if (in.peek() == ']') break;
    in.expect(",");
    in.skip_blanks();
  }
  in.expect("]");
  in.skip_blanks();
  if (!in.done()) in.fail("trailing characters after record");
  return record;
}

std::string format_timeline(const EventTimeline& timeline) {
  std::string out;
  for (const auto& record : timeline.records) {
    out += format_record(record);
    out += '\n';
  }
  return out;
}

EventTimeline parse_timeline(std::string_view text) {
  EventTimeline timeline;
  const auto rows = text::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (text::trim(rows[i]).empty()) continue;
    EventRecord record;
    try {
      record = parse_line(rows[i]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), i + 1, e.column());
    }
    if (!timeline.records.empty() &&
        record.timestamp_s <= timeline.records.back().timestamp_s) {
      throw ParseError("timestamps must strictly increase", i + 1);
    }
    timeline.records.push_back(std::move(record));
  }
  return timeline;
}

EventTimeline build_timeline(const std::vector<FrameDetections>& frames, double threshold) {
  EventTimeline timeline;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Seconds t = frames[i].frame.timestamp_s;
    if (i > 0) {
      const Seconds prev = frames[i - 1].frame.timestamp_s;
      if (t == prev) {
        throw InvalidArgument("duplicate frame timestamp " + std::to_string(t));
      }
      if (t < prev) throw InvalidArgument("frames are not sorted by timestamp");
    }
    FrameDetections kept = filter_confident(frames[i], threshold);
    if (kept.detections.empty()) continue;
    std::stable_sort(kept.detections.begin(), kept.detections.end(),
                     [](const Detection& a, const Detection& b) {
                       return a.confidence > b.confidence;
                     });
    EventRecord record{t, {}};
    for (const auto& d : kept.detections) {
      record.events.push_back({d.label, d.confidence * 100.0});
    }
    timeline.records.push_back(std::move(record));
  }
  return timeline;
}

}  // namespace hforge
