#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hforge {

using Seconds = std::int64_t;

inline constexpr Seconds kDefaultSampleInterval = 2;

/// Which frames pass 1 extracts: t = 0, interval, 2*interval, ... <= duration.
struct SamplePlan {
  std::string video_stem;
  Seconds duration_s = 0;
  Seconds interval_s = kDefaultSampleInterval;
  std::vector<Seconds> timestamps;
};

/// A sampled frame on disk; the timestamp is encoded in the file name.
struct FrameRef {
  std::filesystem::path path;
  Seconds timestamp_s = 0;

  friend bool operator==(const FrameRef&, const FrameRef&) = default;
};

struct FrameName {
  std::string stem;
  Seconds timestamp_s = 0;

  friend bool operator==(const FrameName&, const FrameName&) = default;
};

std::vector<Seconds> plan_samples(Seconds duration_s, Seconds interval_s);

SamplePlan make_sample_plan(std::string video_stem, Seconds duration_s,
                            Seconds interval_s = kDefaultSampleInterval);

/// "<stem>_<t>.jpg", t unpadded.
std::string frame_filename(std::string_view stem, Seconds t);

/// Splits at the last underscore. Only the file-name component of `name`
/// is inspected, so directory prefixes are allowed.
FrameName parse_frame_filename(std::string_view name);

/// Numeric, stable ordering by timestamp. Unparseable names are collected
/// and reported together in one ParseError.
std::vector<FrameRef> sort_frames(const std::vector<std::string>& names);

/// Every "*.jpg" directly inside `dir`, sorted by sort_frames().
std::vector<FrameRef> list_frames(const std::filesystem::path& dir);

}  // namespace hforge
