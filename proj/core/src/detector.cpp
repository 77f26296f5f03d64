#include "highlight_forge/detector.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <mutex>
#include <optional>
#include <thread>

#include "highlight_forge/errors.hpp"
#include "highlight_forge/text.hpp"

namespace hforge {

std::vector<BackendProfile> builtin_profiles() {
  return {
      {"frcnn-vgg16", 0.9, 0.7, MinDimInput{300}},
      {"frcnn-resnet50", 0.6, 0.7, FixedInput{ImageDims(320, 320)}},
      {"frcnn-resnet50-strict", 0.8, 0.7, FixedInput{ImageDims(320, 320)}},
      {"fixture", 0.9, 0.7, MinDimInput{300}},
  };
}

BackendProfile find_profile(std::string_view name) {
  for (auto& profile : builtin_profiles()) {
    if (profile.name == name) return profile;
  }
  std::string known;
  for (const auto& profile : builtin_profiles()) {
    known += (known.empty() ? "" : ", ") + profile.name;
  }
  throw ConfigError("unknown backend '" + std::string(name) + "' (known: " + known + ")");
}

FixtureTable parse_fixture_table(std::string_view text) {
  FixtureTable table;
  const auto rows = text::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto row = text::trim(rows[i]);
    if (row.empty() || row.front() == '#') continue;
    const auto fields = text::split(row, '\t');
    const std::string frame(text::trim(fields[0]));
    if (frame.empty()) throw ParseError("empty frame name", line_no);
    auto& detections = table[frame];
    if (fields.size() == 1) continue;
    if (fields.size() != 7) {
      throw ParseError("expected 1 or 7 tab-separated fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    auto label = try_parse_event_class(text::trim(fields[1]));
    if (!label) throw ParseError("unknown event label '" + std::string(fields[1]) + "'", line_no);
    double numbers[5];
    for (int k = 0; k < 5; ++k) {
      auto value = text::parse_double(text::trim(fields[k + 2]));
      if (!value) {
        throw ParseError("not a number: '" + std::string(fields[k + 2]) + "'", line_no);
      }
      numbers[k] = *value;
    }
    if (!(numbers[0] >= 0.0 && numbers[0] <= 1.0)) {
      throw ParseError("confidence outside [0, 1]", line_no);
    }
    if (!BoundingBox::is_valid(numbers[1], numbers[2], numbers[3], numbers[4])) {
      throw ParseError("invalid bounding box", line_no);
    }
    detections.emplace_back(BoundingBox(numbers[1], numbers[2], numbers[3], numbers[4]),
                            *label, numbers[0]);
  }
  return table;
}

std::string format_fixture_table(const FixtureTable& table) {
  std::string out;
  for (const auto& [frame, detections] : table) {
    if (detections.empty()) {
      out += frame + "\n";
      continue;
    }
    for (const auto& d : detections) {
      out += frame;
      for (const std::string& field :
           {std::string(canonical_name(d.label)), text::format_shortest(d.confidence),
            text::format_shortest(d.box.x1()), text::format_shortest(d.box.y1()),
            text::format_shortest(d.box.x2()), text::format_shortest(d.box.y2())}) {
        out += '\t';
        out += field;
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<Detection> FixtureBackend::detect(const FrameRef& frame) {
  const auto it = table_->find(frame.path.filename().string());
  if (it == table_->end()) return {};
  return it->second;
}

FrameDetections detect_frame(DetectorBackend& backend, const BackendProfile& profile,
                             const FrameRef& frame) {
  if (!std::filesystem::exists(frame.path)) {
    throw InvalidArgument("frame file '" + frame.path.string() + "' does not exist");
  }
  std::vector<Detection> raw = backend.detect(frame);
  std::erase_if(raw, [&](const Detection& d) {
    return d.confidence < profile.box_confidence_threshold;
  });
  return FrameDetections{frame, nms(raw, profile.overlap_threshold)};
}

FrameDetections filter_confident(const FrameDetections& frame, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("confidence threshold outside [0, 1]");
  }
  FrameDetections out{frame.frame, {}};
  for (const auto& d : frame.detections) {
    if (d.confidence > threshold) out.detections.push_back(d);
  }
  return out;
}

DetectionRun detect_all(const std::vector<FrameRef>& frames, const BackendFactory& factory,
                        const BackendProfile& profile, const DetectOptions& options) {
  const std::size_t n = frames.size();
  std::vector<std::optional<FrameDetections>> results(n);
  std::vector<std::optional<std::string>> failures(n);
  std::atomic<std::size_t> next{0};
  std::mutex warn_mutex;

  auto warn = [&](const std::string& message) {
    if (!options.on_warning) return;
    std::lock_guard lock(warn_mutex);
    options.on_warning(message);
  };

  auto worker = [&] {
    std::unique_ptr<DetectorBackend> backend;
    try {
      backend = factory();
    } catch (const std::exception& e) {
      warn(std::string("detector backend unavailable: ") + e.what());
    }
    for (std::size_t i = next++; i < n; i = next++) {
      const FrameRef& frame = frames[i];
      if (!backend) {
        failures[i] = "no backend";
        continue;
      }
      const int attempts = std::max(1, options.max_attempts);
      for (int attempt = 1; attempt <= attempts; ++attempt) {
        try {
          results[i] = detect_frame(*backend, profile, frame);
          failures[i].reset();
          break;
        } catch (const TransportError& e) {
          failures[i] = std::string("transport: ") + e.what();
          if (attempt < attempts) {
            warn("frame " + frame.path.string() + ": " + e.what() + " (retrying)");
          }
        } catch (const Error& e) {
          failures[i] = std::string(to_string(e.category())) + ": " + e.what();
          break;
        } catch (const std::exception& e) {
          failures[i] = e.what();
          break;
        }
      }
      if (failures[i]) warn("skipping frame " + frame.path.string() + ": " + *failures[i]);
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, options.workers)), 1,
                              std::max<std::size_t>(n, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  DetectionRun run;
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i]) {
      run.frames.push_back(std::move(*results[i]));
    } else {
      run.skipped.push_back({frames[i], failures[i].value_or("unknown failure")});
    }
  }
  return run;
}

}  // namespace hforge
