#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "highlight_forge/cli/config.hpp"
#include "highlight_forge/clip_planner.hpp"
#include "highlight_forge/detector.hpp"
#include "highlight_forge/errors.hpp"
#include "highlight_forge/render.hpp"
#include "highlight_forge/timeline.hpp"

namespace hforge::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitEnvironment = 3,
  kExitProtocol = 4,
  kExitExecution = 5,
  kExitInput = 6,
};

int exit_code_for(ErrorCategory category) noexcept;

struct SamplePass {
  SamplePlan plan;
  std::vector<CommandSpec> specs;
  std::optional<RunReport> report;  ///< unset on dry runs
};

struct DetectPass {
  DetectionRun run;
  EventTimeline timeline;
};

struct RenderPass {
  std::vector<CommandSpec> specs;
  std::optional<RunReport> report;  ///< unset on dry runs
};

struct PipelineResult {
  RunPaths paths;
  Seconds duration_s = 0;
  SamplePass sample;
  DetectPass detect;
  CutList cutlist;
  std::optional<RenderPass> render;  ///< unset when there was nothing to render
};

/// config.duration_s, or the media probe's answer for config.video.
Seconds video_duration(const PipelineConfig& config);

/// Pass 1: plan and (unless dry-run) extract frames into paths.frames_dir.
SamplePass run_sample(const PipelineConfig& config, const RunPaths& paths, std::ostream& log);

/// Pass 2: detect over paths.frames_dir and (unless dry-run) write the
/// metadata file.
DetectPass run_detect(const PipelineConfig& config, const RunPaths& paths, std::ostream& log);

/// Pass 3a: merge padded events into a cut list and (unless dry-run) write it.
CutList run_plan(const PipelineConfig& config, const RunPaths& paths,
                 const EventTimeline& timeline, Seconds duration_s);

/// Pass 3b: plan clip cuts and concatenation and (unless dry-run) run them.
RenderPass run_render(const PipelineConfig& config, const RunPaths& paths,
                      const CutList& cutlist, std::ostream& log);

/// All passes in order with in-memory handoff. Validates inputs before
/// anything is written.
PipelineResult run_pipeline(PipelineConfig& config, std::ostream& log);

/// Subcommand entry points. Data goes to `out`, progress and errors to
/// `err`; the return value is the process exit status.
int cmd_sample(PipelineConfig config, std::ostream& out, std::ostream& err);
int cmd_detect(PipelineConfig config, std::ostream& out, std::ostream& err);
int cmd_plan(PipelineConfig config, std::ostream& out, std::ostream& err);
int cmd_render(PipelineConfig config, std::ostream& out, std::ostream& err);
int cmd_run(PipelineConfig config, std::ostream& out, std::ostream& err);
int cmd_evaluate(PipelineConfig config, std::ostream& out, std::ostream& err);

struct DatasetOptions {
  std::filesystem::path annotations_dir;  ///< *.xml in labelImg format
  std::filesystem::path out_dir;
  bool flip = false;
  std::optional<std::filesystem::path> test_list;  ///< one image path per line
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  bool dry_run = false;
};

/// Writes train.csv, test.csv and annotation.txt (the train split).
int cmd_dataset(const DatasetOptions& options, std::ostream& out, std::ostream& err);

}  // namespace hforge::cli
