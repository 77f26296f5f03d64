#include "highlight_forge/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "highlight_forge/annotation_io.hpp"
#include "highlight_forge/eval.hpp"
#include "highlight_forge/process.hpp"
#include "highlight_forge/sidecar.hpp"
#include "highlight_forge/text.hpp"

namespace hforge::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::config: return kExitConfig;
    case ErrorCategory::environment: return kExitEnvironment;
    case ErrorCategory::transport:
    case ErrorCategory::protocol: return kExitProtocol;
    case ErrorCategory::execution: return kExitExecution;
    case ErrorCategory::parse:
    case ErrorCategory::unknown_label:
    case ErrorCategory::geometry: return kExitInput;
    case ErrorCategory::invalid_argument: return kExitFailure;
  }
  return kExitFailure;
}

namespace {

std::string read_file(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(std::string("cannot read ") + what + " '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw ExecutionError("cannot write '" + path.string() + "'");
}

void require_video(const PipelineConfig& config) {
  if (config.video.empty()) throw ConfigError("no video given (--video)");
  if (!fs::is_regular_file(config.video)) {
    throw ConfigError("video '" + config.video.string() + "' does not exist");
  }
}

void require_backend(const PipelineConfig& config) {
  find_profile(config.backend);
  if (config.backend == "fixture") {
    if (config.fixture_table.empty()) {
      throw ConfigError("the fixture backend needs --fixture-table");
    }
    if (!fs::is_regular_file(config.fixture_table)) {
      throw ConfigError("fixture table '" + config.fixture_table.string() + "' does not exist");
    }
  } else if (config.sidecar.empty()) {
    throw ConfigError("backend '" + config.backend + "' needs a model sidecar (--sidecar)");
  }
}

BackendFactory make_factory(const PipelineConfig& config) {
  if (config.backend == "fixture") {
    auto table = std::make_shared<const FixtureTable>(
        parse_fixture_table(read_file(config.fixture_table, "fixture table")));
    return [table]() -> std::unique_ptr<DetectorBackend> {
      return std::make_unique<FixtureBackend>(table);
    };
  }
  auto connect = sidecar::parse_address(config.sidecar);
  return [connect]() -> std::unique_ptr<DetectorBackend> {
    return std::make_unique<sidecar::SidecarBackend>(connect);
  };
}

void print_report(const RunReport& report, std::ostream& log) {
  log << "  " << report.count(SpecStatus::succeeded) << " succeeded, "
      << report.count(SpecStatus::skipped) << " skipped, " << report.count(SpecStatus::failed)
      << " failed, " << report.count(SpecStatus::not_run) << " not run\n";
  for (const auto& r : report.results) {
    if (r.status != SpecStatus::failed) continue;
    log << "  spec " << r.index << " (" << to_string(r.purpose) << ") exited " << r.exit_code
        << ": " << r.diagnostics << "\n";
  }
}

RunReport execute_or_throw(const std::vector<CommandSpec>& specs, const PipelineConfig& config,
                           std::ostream& log, const char* what) {
  ExecuteOptions options;
  options.workers = config.workers;
  options.resume = config.resume;
  RunReport report = execute_plan(specs, options);
  log << what << ":\n";
  print_report(report, log);
  if (!report.ok()) throw ExecutionError(std::string(what) + " failed");
  return report;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error (" << to_string(e.category()) << "): " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

Seconds video_duration(const PipelineConfig& config) {
  if (config.duration_s) return *config.duration_s;
  require_video(config);
  if (!process::find_executable(config.probe_tool)) {
    throw EnvironmentError("cannot probe video duration: '" + config.probe_tool +
                           "' not found (pass --duration to skip probing)");
  }
  const auto probe = process::run({config.probe_tool, "-v", "error", "-show_entries",
                                   "format=duration", "-of",
                                   "default=noprint_wrappers=1:nokey=1", config.video.string()});
  auto seconds = text::parse_double(text::trim(probe.output));
  if (probe.exit_code != 0 || !seconds || *seconds < 0) {
    throw ConfigError("unreadable video '" + config.video.string() + "'");
  }
  return static_cast<Seconds>(std::floor(*seconds));
}

SamplePass run_sample(const PipelineConfig& config, const RunPaths& paths, std::ostream& log) {
  require_video(config);
  const Seconds duration = video_duration(config);
  SamplePass pass;
  pass.plan = make_sample_plan(config.video.stem().string(), duration, config.sample_interval_s);
  RenderOptions options;
  options.tool = config.tool;
  pass.specs = plan_frame_extraction(config.video, pass.plan, paths.frames_dir, options);
  log << "sample: " << pass.plan.timestamps.size() << " frame(s) every "
      << config.sample_interval_s << " s over " << duration << " s\n";
  if (!config.dry_run && !pass.specs.empty()) {
    pass.report = execute_or_throw(pass.specs, config, log, "frame extraction");
  }
  return pass;
}

DetectPass run_detect(const PipelineConfig& config, const RunPaths& paths, std::ostream& log) {
  require_backend(config);
  const BackendProfile profile = find_profile(config.backend);
  std::vector<FrameRef> frames;
  if (fs::is_directory(paths.frames_dir)) {
    frames = list_frames(paths.frames_dir);
  } else if (config.dry_run) {
    log << "detect: frames directory '" << paths.frames_dir.string()
        << "' does not exist yet; nothing to detect in a dry run\n";
  } else {
    throw ConfigError("frames directory '" + paths.frames_dir.string() + "' does not exist");
  }

  DetectOptions options;
  options.workers = config.workers;
  options.on_warning = [&log](const std::string& message) { log << "warning: " << message << "\n"; };

  DetectPass pass;
  pass.run = detect_all(frames, make_factory(config), profile, options);
  pass.timeline = build_timeline(pass.run.frames, config.confidence);
  log << "detect: " << frames.size() << " frame(s) with backend '" << profile.name << "', "
      << pass.timeline.records.size() << " confident record(s), " << pass.run.skipped.size()
      << " skipped\n";
  if (!frames.empty() && pass.run.frames.empty()) {
    throw ProtocolError("every frame failed detection (first: " +
                        pass.run.skipped.front().reason + ")");
  }
  if (!config.dry_run) write_file(paths.metadata, format_timeline(pass.timeline));
  return pass;
}

CutList run_plan(const PipelineConfig& config, const RunPaths& paths,
                 const EventTimeline& timeline, Seconds duration_s) {
  CutList cutlist = merge_windows(timeline, config.planner, duration_s);
  if (!config.dry_run) write_file(paths.cutlist, cutlist_to_json(cutlist));
  return cutlist;
}

RenderPass run_render(const PipelineConfig& config, const RunPaths& paths,
                      const CutList& cutlist, std::ostream& log) {
  require_video(config);
  RenderOptions options;
  options.tool = config.tool;
  options.margin_px = config.overlay_margin_px;
  RenderPass pass;
  pass.specs = plan_render(cutlist, config.video, paths.out_dir, options);
  log << "render: " << cutlist.clips.size() << " clip(s), "
      << total_highlight_duration(cutlist) << " s of highlights from "
      << cutlist.video_duration_s << " s\n";
  if (!config.dry_run) {
    write_file(paths.render_plan, plan_to_json(pass.specs));
    pass.report = execute_or_throw(pass.specs, config, log, "render");
  }
  return pass;
}

PipelineResult run_pipeline(PipelineConfig& config, std::ostream& log) {
  require_video(config);
  require_backend(config);
  validate(config.planner);
  PipelineResult result;
  result.duration_s = video_duration(config);
  config.duration_s = result.duration_s;
  result.paths = resolve_paths(config);

  result.sample = run_sample(config, result.paths, log);
  result.detect = run_detect(config, result.paths, log);
  result.cutlist = run_plan(config, result.paths, result.detect.timeline, result.duration_s);
  if (result.cutlist.clips.empty()) {
    log << "render: no confident events, nothing to render\n";
  } else {
    result.render = run_render(config, result.paths, result.cutlist, log);
  }
  return result;
}

int cmd_sample(PipelineConfig config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_video(config);
    const RunPaths paths = resolve_paths(config);
    const SamplePass pass = run_sample(config, paths, err);
    if (config.dry_run) out << plan_to_json(pass.specs);
    return kExitOk;
  });
}

int cmd_detect(PipelineConfig config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_backend(config);
    const RunPaths paths = resolve_paths(config);
    const DetectPass pass = run_detect(config, paths, err);
    if (config.dry_run) {
      out << format_timeline(pass.timeline);
    } else {
      err << "wrote " << paths.metadata.string() << "\n";
    }
    return kExitOk;
  });
}

int cmd_plan(PipelineConfig config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config.planner);
    const RunPaths paths = resolve_paths(config);
    const EventTimeline timeline = parse_timeline(read_file(paths.metadata, "metadata file"));
    const CutList cutlist = run_plan(config, paths, timeline, video_duration(config));
    err << "plan: " << timeline.records.size() << " record(s) -> " << cutlist.clips.size()
        << " clip(s), " << total_highlight_duration(cutlist) << " s of "
        << cutlist.video_duration_s << " s\n";
    if (config.dry_run) {
      out << cutlist_to_json(cutlist);
    } else {
      err << "wrote " << paths.cutlist.string() << "\n";
    }
    return kExitOk;
  });
}

int cmd_render(PipelineConfig config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    require_video(config);
    const RunPaths paths = resolve_paths(config);
    const CutList cutlist = cutlist_from_json(read_file(paths.cutlist, "cut list"));
    const RenderPass pass = run_render(config, paths, cutlist, err);
    if (config.dry_run) out << plan_to_json(pass.specs);
    return kExitOk;
  });
}

int cmd_run(PipelineConfig config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const PipelineResult result = run_pipeline(config, err);
    if (config.dry_run) {
      nlohmann::ordered_json doc;
      doc["run_id"] = config.run_id;
      doc["video_duration_s"] = result.duration_s;
      doc["frame_extraction"] = nlohmann::json::parse(plan_to_json(result.sample.specs));
      doc["metadata"] = format_timeline(result.detect.timeline);
      doc["cutlist"] = nlohmann::json::parse(cutlist_to_json(result.cutlist));
      doc["highlight_duration_s"] = total_highlight_duration(result.cutlist);
      doc["render"] = result.render ? nlohmann::json::parse(plan_to_json(result.render->specs))
                                    : nlohmann::json::array();
      out << doc.dump(2) << "\n";
    } else {
      err << "run " << config.run_id << " complete: "
          << total_highlight_duration(result.cutlist) << " s of highlights in "
          << result.paths.out_dir.string() << "\n";
    }
    return kExitOk;
  });
}

int cmd_evaluate(PipelineConfig config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.truth.empty()) throw ConfigError("evaluate needs --truth");
    const auto truth = parse_ground_truth(read_file(config.truth, "ground truth"));
    const RunPaths paths = resolve_paths(config);
    std::vector<PredictedEvent> predicted;
    if (config.cutlist) {
      predicted = predictions_from_cutlist(cutlist_from_json(read_file(paths.cutlist, "cut list")));
    } else {
      predicted =
          predictions_from_timeline(parse_timeline(read_file(paths.metadata, "metadata file")));
    }
    const EvalReport report = match_events(predicted, truth, config.tolerance_s);
    out << report_table(report);
    if (!config.dry_run) {
      write_file(paths.report, report_json(report, config.tolerance_s));
      err << "wrote " << paths.report.string() << "\n";
    }
    return kExitOk;
  });
}

int cmd_dataset(const DatasetOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!fs::is_directory(options.annotations_dir)) {
      throw ConfigError("annotation directory '" + options.annotations_dir.string() +
                        "' does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(options.annotations_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".xml") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());

    std::vector<AnnotatedImage> images;
    for (const auto& file : files) {
      try {
        images.push_back(parse_voc_xml(read_file(file, "annotation")));
      } catch (const ParseError& e) {
        throw ParseError(file.string() + ": " + e.what());
      }
    }
    if (options.flip) images = augment_flip(images);

    DatasetSplit split;
    if (options.test_list) {
      std::vector<std::string> test_paths;
      const std::string listing = read_file(*options.test_list, "test list");
      for (auto line : text::lines(listing)) {
        line = text::trim(line);
        if (!line.empty()) test_paths.emplace_back(line);
      }
      split = split_by_list(std::move(images), test_paths);
    } else {
      split = split_random(std::move(images), options.test_fraction, options.seed);
    }

    err << "dataset: " << split.train.size() << " train / " << split.test.size()
        << " test image(s) from " << files.size() << " annotation file(s)\n";
    if (options.dry_run) {
      out << write_csv(split.train);
      return kExitOk;
    }
    write_file(options.out_dir / "train.csv", write_csv(split.train));
    write_file(options.out_dir / "test.csv", write_csv(split.test));
    write_file(options.out_dir / "annotation.txt", write_annotation_lines(split.train));
    return kExitOk;
  });
}

}  // namespace hforge::cli
