#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"

#include "highlight_forge/cli/commands.hpp"
#include "highlight_forge/cli/config.hpp"

namespace {

namespace fs = std::filesystem;
using namespace hforge::cli;

/// Flags that map one-to-one onto config keys; values are validated by
/// set_value() so flag and file errors read the same.
const std::vector<std::pair<std::string, std::string>> kFlagKeys = {
    {"--backend", "backend"},
    {"--confidence", "detect.confidence"},
    {"--interval", "sample.interval_s"},
    {"--lead", "planner.lead_s"},
    {"--tail", "planner.tail_s"},
    {"--merge-gap", "planner.merge_gap_s"},
    {"--tolerance", "eval.tolerance_s"},
    {"--workers", "detect.workers"},
    {"--duration", "video.duration_s"},
    {"--video", "paths.video"},
    {"--workdir", "paths.workdir"},
    {"--run-id", "run.id"},
    {"--out-dir", "paths.out_dir"},
    {"--frames", "paths.frames"},
    {"--metadata", "paths.metadata"},
    {"--cutlist", "paths.cutlist"},
    {"--report", "paths.report"},
    {"--truth", "paths.truth"},
    {"--fixture-table", "paths.fixture_table"},
    {"--sidecar", "detect.sidecar"},
    {"--tool", "render.tool"},
    {"--probe-tool", "render.probe_tool"},
    {"--margin", "render.margin_px"},
};

struct PipelineFlags {
  std::map<std::string, std::string> values;
  std::optional<std::string> config;
  bool dry_run = false;
  bool resume = false;
};

void add_pipeline_flags(CLI::App& cmd, PipelineFlags& flags) {
  for (const auto& [flag, key] : kFlagKeys) {
    cmd.add_option_function<std::string>(
        flag, [&flags, key = key](const std::string& v) { flags.values[key] = v; },
        "sets " + key);
  }
  cmd.add_option("--config", flags.config,
                 std::string("key = value config file (falls back to $") + kConfigEnvVar + ")");
  cmd.add_flag("--dry-run", flags.dry_run, "print the plan, write nothing");
  cmd.add_flag("--resume", flags.resume, "skip commands whose outputs already exist");
}

PipelineConfig build_config(const PipelineFlags& flags) {
  std::vector<Setting> file_settings;
  std::optional<fs::path> explicit_path;
  if (flags.config) explicit_path = fs::path(*flags.config);
  if (auto path = config_path(explicit_path)) {
    std::ifstream in(*path);
    if (!in) throw hforge::ConfigError("cannot read config file '" + path->string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    file_settings = parse_config_text(buf.str());
  }
  std::vector<Setting> flag_settings(flags.values.begin(), flags.values.end());
  if (flags.dry_run) flag_settings.emplace_back("run.dry_run", "true");
  if (flags.resume) flag_settings.emplace_back("run.resume", "true");
  return resolve_config(file_settings, flag_settings);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"highlight_forge: soccer highlight reels from detected key events"};
  app.require_subcommand(1);

  PipelineFlags flags;
  using Command = int (*)(PipelineConfig, std::ostream&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Command>> pipeline_commands = {
      {"sample", "pass 1: extract a frame every --interval seconds", cmd_sample},
      {"detect", "pass 2: detect events and write the metadata file", cmd_detect},
      {"plan", "pass 3a: merge padded events into a cut list", cmd_plan},
      {"render", "pass 3b: cut, label and concatenate the clips", cmd_render},
      {"run", "all passes: sample, detect, plan, render", cmd_run},
      {"evaluate", "score predictions against ground truth events", cmd_evaluate},
  };
  Command selected = nullptr;
  for (const auto& [name, help, fn] : pipeline_commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_pipeline_flags(*cmd, flags);
    cmd->callback([&selected, fn = fn] { selected = fn; });
  }

  DatasetOptions dataset;
  std::string annotations, out_dir, test_list;
  bool run_dataset = false;
  CLI::App* ds = app.add_subcommand("dataset", "build train/test CSVs and annotation.txt");
  ds->add_option("--annotations", annotations, "directory of labelImg XML files")->required();
  ds->add_option("--out-dir", out_dir, "where to write the CSV files")->required();
  ds->add_flag("--flip", dataset.flip, "add a horizontally flipped twin of every image");
  ds->add_option("--test-list", test_list, "file listing test image paths, one per line");
  ds->add_option("--test-fraction", dataset.test_fraction, "random test share")
      ->check(CLI::Range(0.0, 1.0));
  ds->add_option("--seed", dataset.seed, "random split seed");
  ds->add_flag("--dry-run", dataset.dry_run, "print train.csv instead of writing files");
  ds->callback([&] { run_dataset = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (run_dataset) {
    dataset.annotations_dir = annotations;
    dataset.out_dir = out_dir;
    if (!test_list.empty()) dataset.test_list = fs::path(test_list);
    return cmd_dataset(dataset, std::cout, std::cerr);
  }

  PipelineConfig config;
  try {
    config = build_config(flags);
  } catch (const hforge::Error& e) {
    std::cerr << "error (" << hforge::to_string(e.category()) << "): " << e.what() << "\n";
    return exit_code_for(e.category());
  }
  return selected(std::move(config), std::cout, std::cerr);
}
