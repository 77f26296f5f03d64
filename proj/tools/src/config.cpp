#include "highlight_forge/cli/config.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <map>

#include "highlight_forge/errors.hpp"
#include "highlight_forge/text.hpp"

namespace hforge::cli {

namespace fs = std::filesystem;

namespace {

using Setter = std::function<void(PipelineConfig&, std::string_view)>;

double fraction(std::string_view key, std::string_view value) {
  auto v = text::parse_double(value);
  if (!v || !(*v >= 0.0 && *v <= 1.0)) {
    throw ConfigError(std::string(key) + " must be a fraction in [0, 1], got '" +
                      std::string(value) + "'");
  }
  return *v;
}

std::int64_t integer(std::string_view key, std::string_view value, std::int64_t min) {
  auto v = text::parse_int(value);
  if (!v || *v < min) {
    throw ConfigError(std::string(key) + " must be an integer >= " + std::to_string(min) +
                      ", got '" + std::string(value) + "'");
  }
  return *v;
}

bool boolean(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(std::string(key) + " must be true or false");
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"backend", [](PipelineConfig& c, std::string_view v) { c.backend = v; }},
      {"detect.confidence",
       [](PipelineConfig& c, std::string_view v) { c.confidence = fraction("detect.confidence", v); }},
      {"detect.workers",
       [](PipelineConfig& c, std::string_view v) {
         c.workers = static_cast<int>(integer("detect.workers", v, 1));
       }},
      {"detect.sidecar", [](PipelineConfig& c, std::string_view v) { c.sidecar = v; }},
      {"sample.interval_s",
       [](PipelineConfig& c, std::string_view v) {
         c.sample_interval_s = integer("sample.interval_s", v, 1);
       }},
      {"planner.lead_s",
       [](PipelineConfig& c, std::string_view v) { c.planner.lead_s = integer("planner.lead_s", v, 0); }},
      {"planner.tail_s",
       [](PipelineConfig& c, std::string_view v) { c.planner.tail_s = integer("planner.tail_s", v, 0); }},
      {"planner.merge_gap_s",
       [](PipelineConfig& c, std::string_view v) {
         c.planner.merge_gap_s = integer("planner.merge_gap_s", v, 0);
       }},
      {"eval.tolerance_s",
       [](PipelineConfig& c, std::string_view v) { c.tolerance_s = integer("eval.tolerance_s", v, 0); }},
      {"video.duration_s",
       [](PipelineConfig& c, std::string_view v) { c.duration_s = integer("video.duration_s", v, 0); }},
      {"paths.video", [](PipelineConfig& c, std::string_view v) { c.video = fs::path(v); }},
      {"paths.workdir", [](PipelineConfig& c, std::string_view v) { c.workdir = fs::path(v); }},
      {"paths.out_dir", [](PipelineConfig& c, std::string_view v) { c.out_dir = fs::path(v); }},
      {"paths.frames", [](PipelineConfig& c, std::string_view v) { c.frames_dir = fs::path(v); }},
      {"paths.metadata", [](PipelineConfig& c, std::string_view v) { c.metadata = fs::path(v); }},
      {"paths.cutlist", [](PipelineConfig& c, std::string_view v) { c.cutlist = fs::path(v); }},
      {"paths.report", [](PipelineConfig& c, std::string_view v) { c.report = fs::path(v); }},
      {"paths.truth", [](PipelineConfig& c, std::string_view v) { c.truth = fs::path(v); }},
      {"paths.fixture_table",
       [](PipelineConfig& c, std::string_view v) { c.fixture_table = fs::path(v); }},
      {"run.id", [](PipelineConfig& c, std::string_view v) { c.run_id = v; }},
      {"run.dry_run",
       [](PipelineConfig& c, std::string_view v) { c.dry_run = boolean("run.dry_run", v); }},
      {"run.resume",
       [](PipelineConfig& c, std::string_view v) { c.resume = boolean("run.resume", v); }},
      {"render.tool", [](PipelineConfig& c, std::string_view v) { c.tool = v; }},
      {"render.probe_tool", [](PipelineConfig& c, std::string_view v) { c.probe_tool = v; }},
      {"render.margin_px",
       [](PipelineConfig& c, std::string_view v) {
         c.overlay_margin_px = static_cast<int>(integer("render.margin_px", v, 0));
       }},
  };
  return table;
}

std::string clock_run_id() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "run-%Y%m%d-%H%M%S", &utc);
  return buf;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [key, setter] : setters()) keys.push_back(key);
  return keys;
}

void set_value(PipelineConfig& config, std::string_view key, std::string_view value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  it->second(config, text::trim(value));
}

std::vector<Setting> parse_config_text(std::string_view text) {
  std::vector<Setting> settings;
  const auto rows = text::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = text::trim(rows[i]);
    if (row.empty() || row.front() == '#') continue;
    const auto eq = row.find('=');
    const std::string where = "config line " + std::to_string(i + 1) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const auto key = text::trim(row.substr(0, eq));
    if (!setters().count(key)) {
      throw ConfigError(where + "unknown config key '" + std::string(key) + "'");
    }
    settings.emplace_back(std::string(key), std::string(text::trim(row.substr(eq + 1))));
  }
  return settings;
}

PipelineConfig resolve_config(const std::vector<Setting>& file_settings,
                              const std::vector<Setting>& flag_settings) {
  PipelineConfig config;
  for (const auto& [key, value] : file_settings) set_value(config, key, value);
  for (const auto& [key, value] : flag_settings) set_value(config, key, value);
  return config;
}

std::optional<fs::path> config_path(const std::optional<fs::path>& explicit_path) {
  if (explicit_path) return explicit_path;
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) return fs::path(env);
  return std::nullopt;
}

RunPaths resolve_paths(PipelineConfig& config) {
  if (config.run_id.empty()) config.run_id = clock_run_id();
  RunPaths paths;
  paths.run_dir = config.workdir / config.run_id;
  paths.frames_dir = config.frames_dir.value_or(paths.run_dir / "frames");
  paths.metadata = config.metadata.value_or(paths.run_dir / "metadata.tsv");
  paths.cutlist = config.cutlist.value_or(paths.run_dir / "cutlist.json");
  paths.out_dir = config.out_dir.value_or(paths.run_dir);
  paths.render_plan = paths.out_dir / "render_plan.json";
  paths.report = config.report.value_or(paths.run_dir / "eval.json");
  return paths;
}

}  // namespace hforge::cli
