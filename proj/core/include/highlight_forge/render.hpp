#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "highlight_forge/clip_planner.hpp"
#include "highlight_forge/frame_sampler.hpp"

namespace hforge {

enum class CommandPurpose {
  extract_frames,
  cut_clip,
  concat,
};

const char* to_string(CommandPurpose purpose) noexcept;

/// Text burned into the top-left corner of every frame of a clip.
struct OverlayDirective {
  std::string text;  ///< "<label>: <confidence, 2 decimals>%"
  int margin_px = 10;

  friend bool operator==(const OverlayDirective&, const OverlayDirective&) = default;
};

/// A file the runner must write before executing the command (e.g. the
/// concat demuxer's input list).
struct GeneratedFile {
  std::filesystem::path path;
  std::string content;

  friend bool operator==(const GeneratedFile&, const GeneratedFile&) = default;
};

/// One external media-tool invocation.
struct CommandSpec {
  CommandPurpose purpose;
  std::vector<std::string> argv;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  std::vector<GeneratedFile> generated;
  std::optional<OverlayDirective> overlay;

  friend bool operator==(const CommandSpec&, const CommandSpec&) = default;
};

struct RenderOptions {
  std::string tool = "ffmpeg";
  int margin_px = 10;
  int font_size = 28;
};

OverlayDirective make_overlay(EventClass label, double confidence_pct, int margin_px = 10);

/// One cut_clip per clip, in order, then a single concat over their
/// outputs. Clips are named "clip_<index>_<start>_<end>.mp4" and the result
/// is "<video stem>_highlights.mp4". Throws InvalidArgument on an empty
/// cut list.
std::vector<CommandSpec> plan_render(const CutList& cutlist,
                                     const std::filesystem::path& video_path,
                                     const std::filesystem::path& out_dir,
                                     const RenderOptions& options = {});

/// One single-frame grab per planned timestamp, written as
/// frame_filename(plan.video_stem, t) inside `out_dir`.
std::vector<CommandSpec> plan_frame_extraction(const std::filesystem::path& video_path,
                                               const SamplePlan& plan,
                                               const std::filesystem::path& out_dir,
                                               const RenderOptions& options = {});

/// Plan as a JSON document, for --dry-run output and inspection.
std::string plan_to_json(const std::vector<CommandSpec>& specs);

enum class SpecStatus {
  succeeded,
  failed,
  skipped,  ///< outputs already present under resume
  not_run,  ///< never started because an earlier spec failed
};

const char* to_string(SpecStatus status) noexcept;

struct SpecResult {
  std::size_t index = 0;
  CommandPurpose purpose = CommandPurpose::cut_clip;
  SpecStatus status = SpecStatus::not_run;
  int exit_code = 0;
  std::chrono::milliseconds elapsed{0};
  std::vector<std::filesystem::path> produced;
  std::string diagnostics;  ///< tail of the tool's output on failure
};

struct RunReport {
  std::vector<SpecResult> results;  ///< same order as the plan

  std::size_t count(SpecStatus status) const noexcept;
  bool ok() const noexcept;
};

struct ExecuteOptions {
  int workers = 1;
  bool resume = false;  ///< skip specs whose outputs all exist
  std::function<void(const SpecResult&)> on_result;
};

/// Runs extraction and cut specs (up to `workers` at a time), then the
/// concat specs once every earlier spec has succeeded. A failure stops
/// scheduling; later specs are reported as not_run. Every tool named in
/// argv[0] of a spec that will run is resolved first, and a missing one
/// throws EnvironmentError before anything executes.
RunReport execute_plan(const std::vector<CommandSpec>& specs,
                       const ExecuteOptions& options = {});

}  // namespace hforge
