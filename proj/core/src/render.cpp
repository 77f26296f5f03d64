#include "highlight_forge/render.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

#include "highlight_forge/errors.hpp"
#include "highlight_forge/process.hpp"

namespace hforge {

namespace fs = std::filesystem;

const char* to_string(CommandPurpose purpose) noexcept {
  switch (purpose) {
    case CommandPurpose::extract_frames: return "extract_frames";
    case CommandPurpose::cut_clip: return "cut_clip";
    case CommandPurpose::concat: return "concat";
  }
  return "unknown";
}

const char* to_string(SpecStatus status) noexcept {
  switch (status) {
    case SpecStatus::succeeded: return "succeeded";
    case SpecStatus::failed: return "failed";
    case SpecStatus::skipped: return "skipped";
    case SpecStatus::not_run: return "not_run";
  }
  return "unknown";
}

OverlayDirective make_overlay(EventClass label, double confidence_pct, int margin_px) {
  char pct[64];
  std::snprintf(pct, sizeof(pct), "%.2f", confidence_pct);
  return OverlayDirective{std::string(canonical_name(label)) + ": " + pct + "%", margin_px};
}

namespace {

std::string escape(std::string_view value, std::string_view specials) {
  std::string out;
  for (char c : value) {
    if (specials.find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

/// drawtext's text= value, escaped for the option parser and then for the
/// filtergraph parser.
std::string drawtext_value(std::string_view text) {
  return escape(escape(text, "\\':"), "\\'[],;");
}

std::string drawtext_filter(const OverlayDirective& overlay, int font_size) {
  const std::string margin = std::to_string(overlay.margin_px);
  return "drawtext=expansion=none:text=" + drawtext_value(overlay.text) + ":x=" + margin +
         ":y=" + margin + ":fontsize=" + std::to_string(font_size) +
         ":fontcolor=white:box=1:boxcolor=black@0.6:boxborderw=6";
}

std::vector<std::string> tool_prefix(const RenderOptions& options) {
  if (options.tool.empty()) throw InvalidArgument("media tool name is empty");
  return {options.tool, "-hide_banner", "-loglevel", "error", "-y"};
}

void check_unique_outputs(const std::vector<CommandSpec>& specs) {
  std::set<fs::path> seen;
  for (const auto& spec : specs) {
    for (const auto& out : spec.outputs) {
      if (!seen.insert(out.lexically_normal()).second) {
        throw InvalidArgument("plan writes '" + out.string() + "' more than once");
      }
    }
  }
}

}  // namespace

std::vector<CommandSpec> plan_render(const CutList& cutlist, const fs::path& video_path,
                                     const fs::path& out_dir, const RenderOptions& options) {
  if (cutlist.clips.empty()) throw InvalidArgument("cut list is empty, nothing to render");
  if (video_path.empty() || out_dir.empty()) {
    throw InvalidArgument("video path and output directory are required");
  }

  std::vector<CommandSpec> specs;
  std::vector<fs::path> clip_paths;
  for (std::size_t i = 0; i < cutlist.clips.size(); ++i) {
    const ClipWindow& clip = cutlist.clips[i];
    const fs::path out = out_dir / ("clip_" + std::to_string(i) + "_" +
                                    std::to_string(clip.start_s) + "_" +
                                    std::to_string(clip.end_s) + ".mp4");
    OverlayDirective overlay =
        make_overlay(clip.overlay.label, clip.overlay.confidence_pct, options.margin_px);
    auto argv = tool_prefix(options);
    for (std::string arg : {std::string("-ss"), std::to_string(clip.start_s),
                            std::string("-i"), video_path.string(), std::string("-t"),
                            std::to_string(clip.duration()), std::string("-vf"),
                            drawtext_filter(overlay, options.font_size),
                            std::string("-c:v"), std::string("libx264"),
                            std::string("-preset"), std::string("veryfast"),
                            std::string("-c:a"), std::string("aac"), out.string()}) {
      argv.push_back(std::move(arg));
    }
    specs.push_back(CommandSpec{CommandPurpose::cut_clip, std::move(argv), {video_path},
                                {out}, {}, std::move(overlay)});
    clip_paths.push_back(out);
  }

  const std::string stem = video_path.stem().string();
  const fs::path list_path = out_dir / (stem + "_concat.txt");
  const fs::path highlights = out_dir / (stem + "_highlights.mp4");
  std::string list;
  for (const auto& clip : clip_paths) {
    // The concat demuxer resolves relative entries against the list file.
    list += "file '" + escape(clip.filename().string(), "'\\") + "'\n";
  }
  auto argv = tool_prefix(options);
  for (std::string arg : {std::string("-f"), std::string("concat"), std::string("-safe"),
                          std::string("0"), std::string("-i"), list_path.string(),
                          std::string("-c"), std::string("copy"), highlights.string()}) {
    argv.push_back(std::move(arg));
  }
  specs.push_back(CommandSpec{CommandPurpose::concat, std::move(argv), clip_paths,
                              {highlights}, {GeneratedFile{list_path, list}}, std::nullopt});
  check_unique_outputs(specs);
  return specs;
}

std::vector<CommandSpec> plan_frame_extraction(const fs::path& video_path,
                                               const SamplePlan& plan, const fs::path& out_dir,
                                               const RenderOptions& options) {
  std::vector<CommandSpec> specs;
  specs.reserve(plan.timestamps.size());
  for (const Seconds t : plan.timestamps) {
    const fs::path out = out_dir / frame_filename(plan.video_stem, t);
    auto argv = tool_prefix(options);
    for (std::string arg : {std::string("-ss"), std::to_string(t), std::string("-i"),
                            video_path.string(), std::string("-frames:v"), std::string("1"),
                            std::string("-q:v"), std::string("2"), out.string()}) {
      argv.push_back(std::move(arg));
    }
    specs.push_back(
        CommandSpec{CommandPurpose::extract_frames, std::move(argv), {video_path}, {out}, {}, {}});
  }
  check_unique_outputs(specs);
  return specs;
}

std::string plan_to_json(const std::vector<CommandSpec>& specs) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::array();
  for (const auto& spec : specs) {
    ordered_json j;
    j["purpose"] = to_string(spec.purpose);
    j["argv"] = spec.argv;
    j["inputs"] = ordered_json::array();
    for (const auto& p : spec.inputs) j["inputs"].push_back(p.string());
    j["outputs"] = ordered_json::array();
    for (const auto& p : spec.outputs) j["outputs"].push_back(p.string());
    if (!spec.generated.empty()) {
      j["generated"] = ordered_json::array();
      for (const auto& g : spec.generated) {
        j["generated"].push_back({{"path", g.path.string()}, {"content", g.content}});
      }
    }
    if (spec.overlay) {
      j["overlay"] = {{"text", spec.overlay->text},
                      {"position", "top-left"},
                      {"margin_px", spec.overlay->margin_px}};
    }
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::size_t RunReport::count(SpecStatus status) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      results.begin(), results.end(), [status](const SpecResult& r) { return r.status == status; }));
}

bool RunReport::ok() const noexcept {
  return count(SpecStatus::failed) == 0 && count(SpecStatus::not_run) == 0;
}

namespace {

bool outputs_exist(const CommandSpec& spec) {
  return !spec.outputs.empty() &&
         std::all_of(spec.outputs.begin(), spec.outputs.end(),
                     [](const fs::path& p) { return fs::exists(p); });
}

std::string tail(const std::string& text, std::size_t max_chars = 2000) {
  return text.size() <= max_chars ? text : text.substr(text.size() - max_chars);
}

SpecResult run_spec(const CommandSpec& spec, std::size_t index) {
  SpecResult result;
  result.index = index;
  result.purpose = spec.purpose;
  try {
    for (const auto& out : spec.outputs) {
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
    }
    for (const auto& file : spec.generated) {
      if (file.path.has_parent_path()) fs::create_directories(file.path.parent_path());
      std::ofstream f(file.path, std::ios::binary | std::ios::trunc);
      f << file.content;
      if (!f) throw ExecutionError("cannot write '" + file.path.string() + "'");
    }
    const process::Result run = process::run(spec.argv);
    result.exit_code = run.exit_code;
    result.elapsed = run.elapsed;
    if (run.exit_code != 0) {
      result.status = SpecStatus::failed;
      result.diagnostics = tail(run.output);
      return result;
    }
    for (const auto& out : spec.outputs) {
      if (fs::exists(out)) {
        result.produced.push_back(out);
      } else {
        result.status = SpecStatus::failed;
        result.diagnostics = "tool exited 0 but did not produce '" + out.string() + "'";
        return result;
      }
    }
    result.status = SpecStatus::succeeded;
  } catch (const std::exception& e) {
    result.status = SpecStatus::failed;
    result.exit_code = -1;
    result.diagnostics = e.what();
  }
  return result;
}

}  // namespace

RunReport execute_plan(const std::vector<CommandSpec>& specs, const ExecuteOptions& options) {
  RunReport report;
  report.results.resize(specs.size());
  std::vector<bool> skip(specs.size(), false);

  std::set<std::string> missing;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    report.results[i].index = i;
    report.results[i].purpose = specs[i].purpose;
    if (specs[i].argv.empty()) throw InvalidArgument("command spec with empty argv");
    skip[i] = options.resume && outputs_exist(specs[i]);
    if (!skip[i] && !process::find_executable(specs[i].argv.front())) {
      missing.insert(specs[i].argv.front());
    }
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& name : missing) names += (names.empty() ? "" : ", ") + name;
    throw EnvironmentError("media tool not found on PATH: " + names);
  }

  std::mutex report_mutex;
  auto publish = [&](SpecResult result) {
    std::lock_guard lock(report_mutex);
    if (options.on_result) options.on_result(result);
    report.results[result.index] = std::move(result);
  };

  std::vector<std::size_t> first_phase;
  std::vector<std::size_t> barrier_phase;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    (specs[i].purpose == CommandPurpose::concat ? barrier_phase : first_phase).push_back(i);
  }

  std::atomic<bool> failed{false};
  auto run_phase = [&](const std::vector<std::size_t>& indices, int workers) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k = next++; k < indices.size(); k = next++) {
        const std::size_t i = indices[k];
        if (failed) continue;
        if (skip[i]) {
          SpecResult r;
          r.index = i;
          r.purpose = specs[i].purpose;
          r.status = SpecStatus::skipped;
          r.produced = specs[i].outputs;
          publish(std::move(r));
          continue;
        }
        SpecResult r = run_spec(specs[i], i);
        if (r.status == SpecStatus::failed) failed = true;
        publish(std::move(r));
      }
    };
    const auto n = static_cast<std::size_t>(std::max(1, workers));
    if (n == 1 || indices.size() <= 1) {
      worker();
      return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(n, indices.size()); ++w) pool.emplace_back(worker);
  };

  run_phase(first_phase, options.workers);
  run_phase(barrier_phase, 1);
  return report;
}

}  // namespace hforge
