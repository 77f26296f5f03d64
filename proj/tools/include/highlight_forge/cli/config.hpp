#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "highlight_forge/clip_planner.hpp"
#include "highlight_forge/frame_sampler.hpp"

namespace hforge::cli {

inline constexpr const char* kConfigEnvVar = "HIGHLIGHT_FORGE_CONFIG";

/// Everything the passes need. Layered as defaults < config file < flags.
struct PipelineConfig {
  std::string backend = "frcnn-vgg16";
  double confidence = 0.9;
  Seconds sample_interval_s = kDefaultSampleInterval;
  PlannerConfig planner;
  Seconds tolerance_s = 10;
  int workers = 1;
  std::optional<Seconds> duration_s;  ///< probed from the video when unset

  std::filesystem::path video;
  std::filesystem::path workdir = "work";
  std::string run_id;  ///< empty: stamped from the clock on first use
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::filesystem::path> frames_dir;
  std::optional<std::filesystem::path> metadata;
  std::optional<std::filesystem::path> cutlist;
  std::optional<std::filesystem::path> report;
  std::filesystem::path truth;
  std::filesystem::path fixture_table;
  std::string sidecar;

  std::string tool = "ffmpeg";
  std::string probe_tool = "ffprobe";
  int overlay_margin_px = 10;

  bool dry_run = false;
  bool resume = false;
};

using Setting = std::pair<std::string, std::string>;

/// Dotted keys accepted in config files, e.g. "planner.lead_s".
std::vector<std::string> config_keys();

/// Throws ConfigError for unknown keys or values of the wrong type/range.
void set_value(PipelineConfig& config, std::string_view key, std::string_view value);

/// "key = value" lines; '#' comments and blank lines ignored. Errors name
/// the offending line.
std::vector<Setting> parse_config_text(std::string_view text);

/// defaults, then `file_settings`, then `flag_settings`.
PipelineConfig resolve_config(const std::vector<Setting>& file_settings,
                              const std::vector<Setting>& flag_settings);

/// `explicit_path` if given, else $HIGHLIGHT_FORGE_CONFIG, else none.
std::optional<std::filesystem::path> config_path(
    const std::optional<std::filesystem::path>& explicit_path);

/// Artifact locations, defaulting to <workdir>/<run id>/...
struct RunPaths {
  std::filesystem::path run_dir;
  std::filesystem::path frames_dir;
  std::filesystem::path metadata;
  std::filesystem::path cutlist;
  std::filesystem::path out_dir;
  std::filesystem::path render_plan;
  std::filesystem::path report;
};

/// Fills config.run_id from the clock when it is empty.
RunPaths resolve_paths(PipelineConfig& config);

}  // namespace hforge::cli
