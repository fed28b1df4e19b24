#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "lorecos/scenario.hpp"
#include "lorecos/simulation.hpp"

namespace lorecos {

struct RunRequest {
  std::filesystem::path scenario_path;
  std::optional<Algorithm> algo;
  std::optional<SimTime> duration_ms;
  /// Overrides the scenario's [run] out_dir when set.
  std::optional<std::filesystem::path> out_dir;
  bool trace = false;
};

/// Loads the scenario and applies the request's overrides, re-validating.
ScenarioConfig resolve(const RunRequest& request);

/// Runs a request and writes its reports. Returns the process exit status;
/// diagnostics go to `err`, a one-line summary to `out`.
int run(const RunRequest& request, std::ostream& out, std::ostream& err);

/// Runs an already-resolved scenario and writes its reports into out_dir.
RunResult run_and_emit(const ScenarioConfig& config, const std::filesystem::path& out_dir, bool trace);

struct ComparisonReport {
  RunResult a;
  RunResult b;
  double packet_ratio_b_over_a = 0.0;
  std::vector<std::pair<SimTime, std::uint64_t>> series_a;
  std::vector<std::pair<SimTime, std::uint64_t>> series_b;
  std::filesystem::path series_csv;
  nlohmann::json to_json() const;
};

inline constexpr SimTime kSeriesStepMs = 10000;

/// Runs both scenarios (in parallel) and writes out_dir/a, out_dir/b,
/// comparison.json and packet_series.csv. Throws ScenarioError if the two
/// scenarios do not share field, radio, roster and mobility.
ComparisonReport compare(const ScenarioConfig& a, const ScenarioConfig& b, const std::filesystem::path& out_dir,
                         bool trace = false);

int compare(const RunRequest& a, const RunRequest& b, const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err);

}  // namespace lorecos
