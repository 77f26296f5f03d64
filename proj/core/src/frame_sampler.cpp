#include "highlight_forge/frame_sampler.hpp"

#include <algorithm>

#include "highlight_forge/errors.hpp"
#include "highlight_forge/text.hpp"

namespace hforge {

std::vector<Seconds> plan_samples(Seconds duration_s, Seconds interval_s) {
  if (interval_s < 1) {
    throw InvalidArgument("sample interval must be at least 1 second, got " +
                          std::to_string(interval_s));
  }
  if (duration_s < 0) throw InvalidArgument("video duration is negative");
  std::vector<Seconds> timestamps;
  timestamps.reserve(static_cast<std::size_t>(duration_s / interval_s + 1));
  for (Seconds t = 0; t <= duration_s; t += interval_s) timestamps.push_back(t);
  return timestamps;
}

SamplePlan make_sample_plan(std::string video_stem, Seconds duration_s,
                            Seconds interval_s) {
  if (video_stem.empty()) throw InvalidArgument("video stem is empty");
  auto timestamps = plan_samples(duration_s, interval_s);
  return SamplePlan{std::move(video_stem), duration_s, interval_s, std::move(timestamps)};
}

std::string frame_filename(std::string_view stem, Seconds t) {
  if (stem.empty()) throw InvalidArgument("frame stem is empty");
  if (stem.find_first_of("/\\") != std::string_view::npos) {
    throw InvalidArgument("frame stem '" + std::string(stem) +
                          "' contains a path separator");
  }
  if (t < 0) throw InvalidArgument("negative frame timestamp");
  return std::string(stem) + "_" + std::to_string(t) + ".jpg";
}

FrameName parse_frame_filename(std::string_view name) {
  const auto slash = name.find_last_of("/\\");
  const std::string_view file =
      slash == std::string_view::npos ? name : name.substr(slash + 1);
  constexpr std::string_view ext = ".jpg";
  if (file.size() < ext.size() || file.substr(file.size() - ext.size()) != ext) {
    throw ParseError("frame '" + std::string(name) + "' does not end in .jpg");
  }
  const std::string_view base = file.substr(0, file.size() - ext.size());
  const auto underscore = base.rfind('_');
  if (underscore == std::string_view::npos || underscore == 0) {
    throw ParseError("frame '" + std::string(name) +
                     "' has no '<stem>_<seconds>' underscore separator");
  }
  auto t = text::parse_digits(base.substr(underscore + 1));
  if (!t) {
    throw ParseError("frame '" + std::string(name) +
                     "' has a non-integer timestamp suffix");
  }
  return FrameName{std::string(base.substr(0, underscore)), *t};
}

std::vector<FrameRef> sort_frames(const std::vector<std::string>& names) {
  std::vector<FrameRef> frames;
  frames.reserve(names.size());
  std::vector<std::string> offenders;
  for (const auto& name : names) {
    try {
      frames.push_back(FrameRef{name, parse_frame_filename(name).timestamp_s});
    } catch (const ParseError&) {
      offenders.push_back(name);
    }
  }
  if (!offenders.empty()) {
    std::string message = std::to_string(offenders.size()) + " unparseable frame name(s):";
    for (const auto& name : offenders) message += " '" + name + "'";
    throw ParseError(message);
  }
  std::stable_sort(frames.begin(), frames.end(), [](const FrameRef& a, const FrameRef& b) {
    return a.timestamp_s < b.timestamp_s;
  });
  return frames;
}

std::vector<FrameRef> list_frames(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw InvalidArgument("frames directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jpg") {
      names.push_back(entry.path().string());
    }
  }
  // Directory iteration order is unspecified; sort names first so that the
  // stable timestamp sort is reproducible.
  std::sort(names.begin(), names.end());
  return sort_frames(names);
}

}  // namespace hforge
