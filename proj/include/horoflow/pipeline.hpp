#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "horoflow/config.hpp"

namespace horoflow {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitHypothesis = 3, kExitNumerical = 4 };

std::string version();

struct RunOptions {
  bool quiet = false;
  // Replaces [output].dir when set (the CLI fills it from HOROFLOW_OUT).
  std::optional<std::filesystem::path> out_dir;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::filesystem::path dir;
  nlohmann::json summary;
};

nlohmann::json config_to_json(const RunConfig& c);

// Flow, lapse, limit mass and inequality for one configuration. Writes
// trace.csv, summary.json, optional SVG plots, and manifest.json last.
RunOutcome run_scenario(const RunConfig& config, const RunOptions& options = {});

// I(f) for the configured profile plus seeded descent starts. Writes
// inequality.json, findings.json when a start drops below 1, and the manifest.
RunOutcome run_inequality(const RunConfig& config, const RunOptions& options = {});

struct SweepEntry {
  std::filesystem::path config;
  RunOutcome outcome;
};
// Every *.toml in dir, in name order, each into <output dir>/<file stem>.
// Scenarios run concurrently.
std::vector<SweepEntry> run_sweep(const std::filesystem::path& dir, const RunOptions& options = {});

}  // namespace horoflow
