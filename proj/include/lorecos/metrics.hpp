#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lorecos/engine.hpp"
#include "lorecos/estimate.hpp"
#include "lorecos/scenario.hpp"

namespace lorecos {

/// Mean Euclidean error over successful records; nullopt when there are none.
std::optional<double> mae(std::span<const EstimateRecord> records);

/// Root mean squared Euclidean error over successful records.
std::optional<double> rmse(std::span<const EstimateRecord> records);

struct KindPercentages {
  double cloc = 0.0;
  double hloc = 0.0;
  double dloc = 0.0;
};

/// Share of each estimate kind among successes, in percent. Failures are
/// excluded from the denominator; all zero when nothing succeeded.
KindPercentages kind_percentages(std::span<const EstimateRecord> records);

struct DeliveryStats {
  std::uint64_t events_generated = 0;
  std::uint64_t events_sent = 0;
  std::uint64_t events_delivered = 0;
  std::uint64_t events_lost = 0;
  std::uint64_t data_dropped = 0;
};

struct SummaryReport {
  std::string scenario;
  Algorithm algo = Algorithm::kLorecos;
  SimTime duration_ms = 0;
  std::optional<double> mae_m;
  std::optional<double> rmse_m;
  KindPercentages kinds;
  std::size_t success_count = 0;
  std::size_t failure_count = 0;
  PacketCounters packets;
  DeliveryStats delivery;
  nlohmann::json config;
};

SummaryReport summarize(std::span<const EstimateRecord> records, const PacketCounters& packets,
                        const DeliveryStats& delivery, const ScenarioConfig& config);

/// Scenario parameters echoed into every summary.
nlohmann::json config_echo(const ScenarioConfig& config);

nlohmann::json to_json(const SummaryReport& report);

/// Cumulative transmission count sampled every `step` ms up to and including `until`.
std::vector<std::pair<SimTime, std::uint64_t>> cumulative_series(std::span<const SimTime> tx_times, SimTime step,
                                                                 SimTime until);

void write_estimates_csv(std::ostream& out, std::span<const EstimateRecord> records);
void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace);
/// Pretty-printed JSON followed by a newline.
void write_json(std::ostream& out, const nlohmann::json& doc);

/// Writes estimates.csv, summary.json and, when given, trace.csv into out_dir
/// (created if absent). Throws std::runtime_error when a file cannot be written.
void emit(const std::filesystem::path& out_dir, std::span<const EstimateRecord> records,
          const SummaryReport& summary, std::optional<std::span<const TraceRow>> trace = std::nullopt);

/// Writes a file through `writer`, failing loudly on any stream error.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer);

}  // namespace lorecos
