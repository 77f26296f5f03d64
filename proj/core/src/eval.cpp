#include "highlight_forge/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "json.hpp"

#include "highlight_forge/errors.hpp"
#include "highlight_forge/text.hpp"

namespace hforge {

double ClassCounts::precision() const noexcept {
  return predicted() == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted());
}

double ClassCounts::recall() const noexcept {
  return actual() == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(actual());
}

ClassCounts EvalReport::totals() const noexcept {
  ClassCounts sum;
  for (const auto& c : per_class) {
    sum.tp += c.tp;
    sum.fp += c.fp;
    sum.fn += c.fn;
  }
  return sum;
}

EvalReport match_events(const std::vector<PredictedEvent>& predicted,
                        const std::vector<GroundTruthEvent>& truth, Seconds tolerance_s) {
  if (tolerance_s < 0) throw InvalidArgument("tolerance must be >= 0");
  EvalReport report;
  auto by_time = [](const TimedEvent& a, const TimedEvent& b) {
    return a.timestamp_s < b.timestamp_s;
  };

  for (EventClass label : kAllEventClasses) {
    std::vector<TimedEvent> preds;
    std::vector<TimedEvent> truths;
    for (const auto& p : predicted) {
      if (p.label == label) preds.push_back(p);
    }
    for (const auto& t : truth) {
      if (t.label == label) truths.push_back(t);
    }
    std::stable_sort(preds.begin(), preds.end(), by_time);
    std::stable_sort(truths.begin(), truths.end(), by_time);

    ClassCounts& counts = report.per_class[static_cast<std::size_t>(label)];
    std::size_t cursor = 0;  // predictions before this can no longer match
    for (const auto& t : truths) {
      while (cursor < preds.size() && preds[cursor].timestamp_s < t.timestamp_s - tolerance_s) {
        ++cursor;
        ++counts.fp;
      }
      if (cursor < preds.size() && preds[cursor].timestamp_s <= t.timestamp_s + tolerance_s) {
        report.matches.push_back({t, preds[cursor]});
        ++cursor;
        ++counts.tp;
      } else {
        ++counts.fn;
      }
    }
    counts.fp += preds.size() - cursor;
  }
  return report;
}

std::vector<PredictedEvent> predictions_from_timeline(const EventTimeline& timeline) {
  std::vector<PredictedEvent> out;
  for (const auto& record : timeline.records) {
    std::vector<EventClass> seen;
    for (const auto& event : record.events) {
      if (std::find(seen.begin(), seen.end(), event.label) != seen.end()) continue;
      seen.push_back(event.label);
      out.push_back({record.timestamp_s, event.label});
    }
  }
  return out;
}

std::vector<PredictedEvent> predictions_from_cutlist(const CutList& cutlist) {
  std::vector<PredictedEvent> out;
  out.reserve(cutlist.clips.size());
  for (const auto& clip : cutlist.clips) {
    out.push_back({clip.overlay.timestamp_s, clip.overlay.label});
  }
  return out;
}

std::vector<GroundTruthEvent> parse_ground_truth(std::string_view text) {
  std::vector<GroundTruthEvent> out;
  const auto rows = text::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = text::trim(rows[i]);
    if (row.empty() || row.front() == '#') continue;
    const auto fields = text::split(row, ',');
    if (fields.size() != 2) {
      throw ParseError("expected 'timestamp_s,label'", i + 1);
    }
    auto t = text::parse_digits(text::trim(fields[0]));
    if (!t) throw ParseError("timestamp is not a non-negative integer", i + 1);
    const auto name = text::trim(fields[1]);
    auto label = try_parse_event_class(name);
    if (!label) {
      std::string lower(name);
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (lower == "shot at goal" || lower == "shots at goal") label = EventClass::goal;
    }
    if (!label) throw ParseError("unknown event label '" + std::string(name) + "'", i + 1);
    out.push_back({*t, *label});
  }
  return out;
}

std::string report_table(const EvalReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-14s %8s %9s %5s %5s %5s %9s %7s\n", "Event",
                "Actual", "Predicted", "TP", "FP", "FN", "Precision", "Recall");
  out += line;
  auto row = [&](std::string_view name, const ClassCounts& c) {
    std::snprintf(line, sizeof(line), "%-14.*s %8zu %9zu %5zu %5zu %5zu %9.3f %7.3f\n",
                  static_cast<int>(name.size()), name.data(), c.actual(), c.predicted(), c.tp,
                  c.fp, c.fn, c.precision(), c.recall());
    out += line;
  };
  for (EventClass label : kAllEventClasses) row(canonical_name(label), report[label]);
  row("Total", report.totals());
  return out;
}

std::string report_json(const EvalReport& report, Seconds tolerance_s) {
  using nlohmann::ordered_json;
  auto counts_json = [](const ClassCounts& c) {
    ordered_json j;
    j["actual"] = c.actual();
    j["predicted"] = c.predicted();
    j["tp"] = c.tp;
    j["fp"] = c.fp;
    j["fn"] = c.fn;
    j["precision"] = c.precision();
    j["recall"] = c.recall();
    return j;
  };
  ordered_json doc;
  doc["tolerance_s"] = tolerance_s;
  doc["classes"] = ordered_json::object();
  for (EventClass label : kAllEventClasses) {
    doc["classes"][std::string(canonical_name(label))] = counts_json(report[label]);
  }
  doc["total"] = counts_json(report.totals());
  doc["matches"] = ordered_json::array();
  for (const auto& m : report.matches) {
    doc["matches"].push_back({{"label", std::string(canonical_name(m.truth.label))},
                              {"truth_s", m.truth.timestamp_s},
                              {"predicted_s", m.predicted.timestamp_s}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace hforge
