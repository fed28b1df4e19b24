#pragma once

#include <map>
#include <memory>
#include <vector>

#include "lorecos/engine.hpp"
#include "lorecos/metrics.hpp"
#include "lorecos/node.hpp"
#include "lorecos/scenario.hpp"

namespace lorecos {

struct RunResult {
  std::vector<EstimateRecord> records;
  PacketCounters packets;
  DeliveryStats delivery;
  std::vector<TraceRow> trace;
  std::vector<SimTime> tx_times;
  SummaryReport summary;
};

/// One engine, one node per roster entry, wired for the scenario's algorithm.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config, bool trace = false);

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs to the scenario duration.
  void run();
  void run_until(SimTime t_end) { engine_.run_until(t_end); }

  Engine& engine() { return engine_; }
  const ScenarioConfig& config() const { return config_; }
  SensorNode& node(NodeId id) { return *nodes_.at(id); }
  const std::vector<EstimateRecord>& records() const { return records_; }
  Position position_of(NodeId id, SimTime t) const;

  DeliveryStats delivery() const;
  RunResult result() const;

 private:
  void build_nodes();
  void schedule_traffic();

  ScenarioConfig config_;
  std::map<NodeId, std::optional<Position>> fixed_;
  Engine engine_;
  std::map<NodeId, std::unique_ptr<SensorNode>> nodes_;
  std::vector<EstimateRecord> records_;
};

/// Convenience: build, run and collect.
RunResult simulate(const ScenarioConfig& config, bool trace = false);

}  // namespace lorecos
