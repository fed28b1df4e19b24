#include "lorecos/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace lorecos {
namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(round4(*v)) : nlohmann::json(nullptr);
}

}  // namespace

std::optional<double> mae(std::span<const EstimateRecord> records) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (r.failed()) continue;
    sum += r.error_m;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::optional<double> rmse(std::span<const EstimateRecord> records) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (r.failed()) continue;
    sum += r.error_m * r.error_m;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return std::sqrt(sum / static_cast<double>(n));
}

KindPercentages kind_percentages(std::span<const EstimateRecord> records) {
  std::size_t counts[3] = {0, 0, 0};
  std::size_t n = 0;
  for (const auto& r : records) {
    if (r.failed()) continue;
    ++counts[static_cast<std::size_t>(r.estimate->kind)];
    ++n;
  }
  if (n == 0) return {};
  const auto pct = [n](std::size_t c) { return 100.0 * static_cast<double>(c) / static_cast<double>(n); };
  return {pct(counts[0]), pct(counts[1]), pct(counts[2])};
}

nlohmann::json config_echo(const ScenarioConfig& c) {
  nlohmann::json kn = nlohmann::json::array();
  for (NodeId id : c.kn_ids()) kn.push_back(id);
  nlohmann::json waypoints = nlohmann::json::array();
  for (const Position& p : c.mobility.waypoints) waypoints.push_back({p.x, p.y});
  return {
      {"field", {{"width", c.field.width}, {"height", c.field.height}}},
      {"radio", {{"range_m", c.radio.range_m}, {"hop_delay_ms", c.radio.hop_delay_ms}}},
      {"timers",
       {{"event_period_ms", c.timers.event_period_ms},
        {"connect_period_ms", c.timers.connect_period_ms},
        {"hello_wait_T_ms", c.timers.hello_wait_T_ms},
        {"beacon_period_ms", c.timers.beacon_period_ms},
        {"route_lifetime_ms", c.timers.route_lifetime_ms},
        {"rrep_wait_ms", c.timers.rrep_wait_ms},
        {"rreq_retention_ms", c.timers.rreq_retention_ms},
        {"event_start_ms", c.timers.event_start_ms},
        {"connect_start_ms", c.timers.connect_start_ms}}},
      {"node_count", c.nodes.size()},
      {"kn_ids", kn},
      {"source", c.source().id},
      {"destination", c.destination().id},
      {"mobility",
       {{"waypoints", waypoints},
        {"cyclic", c.mobility.cyclic},
        {"step_m", c.mobility.step_m},
        {"step_ms", c.mobility.step_ms}}},
  };
}

SummaryReport summarize(std::span<const EstimateRecord> records, const PacketCounters& packets,
                        const DeliveryStats& delivery, const ScenarioConfig& config) {
  SummaryReport s;
  s.scenario = config.name;
  s.algo = config.algo;
  s.duration_ms = config.duration_ms;
  s.mae_m = mae(records);
  s.rmse_m = rmse(records);
  s.kinds = kind_percentages(records);
  for (const auto& r : records) {
    if (r.failed()) {
      ++s.failure_count;
    } else {
      ++s.success_count;
    }
  }
  s.packets = packets;
  s.delivery = delivery;
  s.config = config_echo(config);
  return s;
}

nlohmann::json to_json(const SummaryReport& s) {
  nlohmann::json packets = nlohmann::json::object();
  for (std::size_t i = 0; i < kTrafficClassCount; ++i) {
    packets[std::string(to_string(static_cast<TrafficClass>(i)))] = s.packets.by_class[i];
  }
  packets["total"] = s.packets.total;
  return {
      {"scenario", s.scenario},
      {"algo", std::string(to_string(s.algo))},
      {"duration_ms", s.duration_ms},
      {"mae_m", optional_number(s.mae_m)},
      {"rmse_m", optional_number(s.rmse_m)},
      {"cloc_pct", round4(s.kinds.cloc)},
      {"hloc_pct", round4(s.kinds.hloc)},
      {"dloc_pct", round4(s.kinds.dloc)},
      {"success_count", s.success_count},
      {"failure_count", s.failure_count},
      {"packets", packets},
      {"delivery",
       {{"events_generated", s.delivery.events_generated},
        {"events_sent", s.delivery.events_sent},
        {"events_delivered", s.delivery.events_delivered},
        {"events_lost", s.delivery.events_lost},
        {"data_dropped", s.delivery.data_dropped}}},
      {"config", s.config},
  };
}

std::vector<std::pair<SimTime, std::uint64_t>> cumulative_series(std::span<const SimTime> tx_times, SimTime step,
                                                                 SimTime until) {
  if (step == 0) throw std::invalid_argument("series step must be positive");
  std::vector<std::pair<SimTime, std::uint64_t>> series;
  std::size_t i = 0;
  std::uint64_t count = 0;
  for (SimTime t = step; t <= until; t += step) {
    while (i < tx_times.size() && tx_times[i] <= t) {
      ++count;
      ++i;
    }
    series.emplace_back(t, count);
  }
  if (series.empty() || series.back().first != until) {
    while (i < tx_times.size() && tx_times[i] <= until) {
      ++count;
      ++i;
    }
    series.emplace_back(until, count);
  }
  return series;
}

void write_estimates_csv(std::ostream& out, std::span<const EstimateRecord> records) {
  out << "t_ms,true_x,true_y,est_x,est_y,kind,error_m,failed\n";
  for (const auto& r : records) {
    out << r.t << ',' << fixed4(r.true_pos.x) << ',' << fixed4(r.true_pos.y) << ',';
    if (r.estimate) {
      out << fixed4(r.estimate->position.x) << ',' << fixed4(r.estimate->position.y) << ','
          << label(r.estimate->kind) << ',' << fixed4(r.error_m) << ",0\n";
    } else {
      out << ",,,,1\n";
    }
  }
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace) {
  out << "time_ms,sender,receiver,type,flags,rreq_id,dest,orig,xloc,yloc\n";
  for (const auto& row : trace) {
    const WirePacket& p = row.packet;
    out << row.time << ',' << row.sender << ',';
    if (row.receiver) out << *row.receiver;
    out << ',' << to_string(classify(p, !row.receiver.has_value())) << ',' << static_cast<int>(p.flags.bits())
        << ',';
    if (p.type == PacketType::kRreq) out << p.rreq_id;
    out << ',' << p.dest << ',' << p.orig << ',';
    if (p.flags.location) {
      out << fixed4(p.xloc) << ',' << fixed4(p.yloc);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const nlohmann::json& doc) { out << doc.dump(2) << '\n'; }

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("error while writing " + path.string());
}

void emit(const std::filesystem::path& out_dir, std::span<const EstimateRecord> records,
          const SummaryReport& summary, std::optional<std::span<const TraceRow>> trace) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

  write_file(out_dir / "estimates.csv", [&](std::ostream& out) { write_estimates_csv(out, records); });
  write_file(out_dir / "summary.json", [&](std::ostream& out) { write_json(out, to_json(summary)); });
  if (trace) write_file(out_dir / "trace.csv", [&](std::ostream& out) { write_trace_csv(out, *trace); });
}

}  // namespace lorecos
