#include "lorecos/runner.hpp"

#include <future>
#include <ostream>

namespace lorecos {
namespace {

void print_summary(std::ostream& out, const SummaryReport& s, const std::filesystem::path& dir) {
  const auto show = [](const std::optional<double>& v) { return v ? std::to_string(round4(*v)) : std::string("n/a"); };
  out << s.scenario << " [" << to_string(s.algo) << "] " << s.success_count << "/"
      << (s.success_count + s.failure_count) << " estimates, MAE " << show(s.mae_m) << " m, RMSE "
      << show(s.rmse_m) << " m, CLOC/HLOC/DLOC " << round4(s.kinds.cloc) << "/" << round4(s.kinds.hloc) << "/"
      << round4(s.kinds.dloc) << " %, " << s.packets.total << " transmissions -> " << dir.string() << "\n";
}

}  // namespace

ScenarioConfig resolve(const RunRequest& request) {
  ScenarioConfig config = load_scenario(request.scenario_path);
  if (request.algo) config.algo = *request.algo;
  if (request.duration_ms) config.duration_ms = *request.duration_ms;
  if (request.out_dir) config.out_dir = request.out_dir->string();
  validate(config);
  return config;
}

RunResult run_and_emit(const ScenarioConfig& config, const std::filesystem::path& out_dir, bool trace) {
  RunResult result = simulate(config, trace);
  emit(out_dir, result.records, result.summary,
       trace ? std::optional<std::span<const TraceRow>>(result.trace) : std::nullopt);
  return result;
}

int run(const RunRequest& request, std::ostream& out, std::ostream& err) {
  ScenarioConfig config;
  try {
    config = resolve(request);
  } catch (const std::exception& e) {
    err << "error: " << request.scenario_path.string() << ": " << e.what() << "\n";
    return 2;
  }
  try {
    const std::filesystem::path dir = config.out_dir;
    const RunResult result = run_and_emit(config, dir, request.trace);
    print_summary(out, result.summary, dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

nlohmann::json ComparisonReport::to_json() const {
  return {
      {"a", lorecos::to_json(a.summary)},
      {"b", lorecos::to_json(b.summary)},
      {"packet_ratio_b_over_a", round4(packet_ratio_b_over_a)},
      {"series_csv_path", series_csv.filename().string()},
  };
}

ComparisonReport compare(const ScenarioConfig& a, const ScenarioConfig& b, const std::filesystem::path& out_dir,
                         bool trace) {
  if (!same_setup(a, b)) {
    throw ScenarioError("scenario", "compared scenarios must share field, radio, nodes and mobility");
  }
  validate(a);
  validate(b);

  // Independent engines; nothing is shared between the two runs.
  auto run_b = std::async(std::launch::async, [&]() { return simulate(b, trace); });
  ComparisonReport report;
  report.a = simulate(a, trace);
  report.b = run_b.get();

  const auto trace_span = [trace](const RunResult& r) {
    return trace ? std::optional<std::span<const TraceRow>>(r.trace) : std::nullopt;
  };
  emit(out_dir / "a", report.a.records, report.a.summary, trace_span(report.a));
  emit(out_dir / "b", report.b.records, report.b.summary, trace_span(report.b));

  report.packet_ratio_b_over_a = report.a.packets.total == 0
                                     ? 0.0
                                     : static_cast<double>(report.b.packets.total) /
                                           static_cast<double>(report.a.packets.total);

  const SimTime until = std::max(a.duration_ms, b.duration_ms);
  report.series_a = cumulative_series(report.a.tx_times, kSeriesStepMs, until);
  report.series_b = cumulative_series(report.b.tx_times, kSeriesStepMs, until);
  report.series_csv = out_dir / "packet_series.csv";
  write_file(report.series_csv, [&](std::ostream& out) {
    out << "t_ms," << a.name << "," << b.name << "\n";
    for (std::size_t i = 0; i < report.series_a.size(); ++i) {
      out << report.series_a[i].first << "," << report.series_a[i].second << "," << report.series_b[i].second
          << "\n";
    }
  });
  write_file(out_dir / "comparison.json", [&](std::ostream& out) { write_json(out, report.to_json()); });
  return report;
}

int compare(const RunRequest& a, const RunRequest& b, const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err) {
  ScenarioConfig ca;
  ScenarioConfig cb;
  try {
    ca = resolve(a);
    cb = resolve(b);
    if (!same_setup(ca, cb)) {
      throw ScenarioError("scenario", "compared scenarios must share field, radio, nodes and mobility");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    const auto report = compare(ca, cb, out_dir, a.trace || b.trace);
    print_summary(out, report.a.summary, out_dir / "a");
    print_summary(out, report.b.summary, out_dir / "b");
    out << "packet ratio (b/a): " << round4(report.packet_ratio_b_over_a) << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lorecos
