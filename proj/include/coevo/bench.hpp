#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coevo/engine.hpp"
#include "coevo/instance.hpp"

namespace coevo {

struct EmitFlags {
  bool table = true;
  bool curves = true;
  bool operators = true;
  bool schedules = false;
};

struct ExperimentSpec {
  std::vector<std::string> instances;  // names resolved against data_dir, or paths
  int runs = 10;
  EngineConfig engine;  // engine.seed is the base seed
  std::string generator = "random";
  int factories = 1;
  std::filesystem::path data_dir = "data";
  std::optional<std::filesystem::path> lb_registry;
  EmitFlags emit;
  bool record_wall_time = true;
  int jobs = 1;  // concurrent runs

  /// Throws ConfigInvalid.
  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Relative paths are taken
/// relative to `base_dir`. Throws ConfigInvalid.
ExperimentSpec parse_experiment_spec(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

/// Loads a name or path; throws InstanceNotFound.
Instance resolve_instance(const std::string& name_or_path, const std::filesystem::path& data_dir);

struct InstanceSummary {
  std::string name;
  std::optional<Time> lb;
  Time bm = 0;
  double am = 0;
  std::optional<double> rpd_bm;
  std::optional<double> rpd_am;
};

/// Best, mean and RPDs over the makespans of one instance's runs.
InstanceSummary summarize_runs(std::string name, std::span<const Time> makespans, std::optional<Time> lb);

struct InstanceReport {
  Instance instance;
  InstanceSummary summary;
  std::vector<RunResult> runs;
};

struct ExperimentReport {
  std::vector<InstanceReport> instances;
  std::optional<double> rpd_aver_bm;  // mean over instances with a registered LB
  std::optional<double> rpd_aver_am;
  bool record_wall_time = true;
  EmitFlags emit;
};

ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Writes results.csv, summary.csv, curves/, operators/ and schedules/ as
/// enabled. Throws IoError.
void emit_outputs(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace coevo
