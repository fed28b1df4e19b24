#include "lorecos/simulation.hpp"

#include "lorecos/control.hpp"
#include "lorecos/lorecos.hpp"

namespace lorecos {
namespace {

std::vector<NodeId> roster_ids(const ScenarioConfig& config) {
  std::vector<NodeId> ids;
  for (const NodeSpec& n : config.nodes) ids.push_back(n.id);
  return ids;
}

}  // namespace

Simulation::Simulation(ScenarioConfig config, bool trace)
    : config_((validate(config), std::move(config))),
      engine_(config_.radio, roster_ids(config_), [this](NodeId id, SimTime t) { return position_of(id, t); }) {
  for (const NodeSpec& n : config_.nodes) fixed_[n.id] = n.position;
  engine_.enable_trace(trace);
  engine_.set_receiver([this](NodeId receiver, NodeId sender, const WirePacket& packet, bool via_broadcast) {
    nodes_.at(receiver)->receive(sender, packet, via_broadcast);
  });
  build_nodes();
  schedule_traffic();
}

Position Simulation::position_of(NodeId id, SimTime t) const {
  const auto& fixed = fixed_.at(id);
  return fixed ? *fixed : position_at(config_.mobility, t);
}

void Simulation::build_nodes() {
  const RoutingParams params{config_.timers.route_lifetime_ms, config_.timers.rreq_retention_ms,
                             config_.timers.rrep_wait_ms};
  auto sink = [this](const EstimateRecord& r) { records_.push_back(r); };

  for (const NodeSpec& spec : config_.nodes) {
    const NodeProfile profile{spec.id, spec.knows_location, spec.role == NodeRole::kSource,
                              spec.role == NodeRole::kDestination};
    std::unique_ptr<SensorNode> node;
    switch (config_.algo) {
      case Algorithm::kLorecos:
        node = std::make_unique<LorecosNode>(profile, engine_, params, sink, config_.timers.hello_wait_T_ms);
        break;
      case Algorithm::kControl:
        node = std::make_unique<ControlNode>(profile, engine_, params, sink);
        break;
      case Algorithm::kPlain:
        node = std::make_unique<PlainNode>(profile, engine_, params, sink);
        break;
    }
    nodes_.emplace(spec.id, std::move(node));
  }
}

void Simulation::schedule_traffic() {
  const auto& timers = config_.timers;
  SensorNode* source = nodes_.at(config_.source().id).get();
  SensorNode* destination = nodes_.at(config_.destination().id).get();
  const NodeId dest_id = destination->id();

  // Cycles start strictly before the end of the run; one starting at the
  // final instant could never complete.
  const SimTime end = config_.duration_ms;
  engine_.schedule_periodic(timers.event_start_ms, timers.event_period_ms, [this, source, dest_id, end]() {
    if (engine_.now() < end) source->start_event_cycle(dest_id);
  });
  engine_.schedule_periodic(timers.connect_start_ms, timers.connect_period_ms,
                            [destination]() { destination->routing().connect_tick(); });

  if (config_.algo == Algorithm::kControl) {
    // Staggered by id so the beacon rounds never coincide exactly.
    for (const auto& [id, node] : nodes_) {
      if (!node->knows_location() || !fixed_.at(id)) continue;
      auto* control = static_cast<ControlNode*>(node.get());
      engine_.schedule_periodic(id, timers.beacon_period_ms, [control]() { control->beacon_tick(); });
    }
  }
}

void Simulation::run() { engine_.run_until(config_.duration_ms); }

DeliveryStats Simulation::delivery() const {
  DeliveryStats d;
  const auto& source = *nodes_.at(config_.source().id);
  d.events_generated = source.cycles_started();
  d.events_sent = source.routing().stats().events_sent;
  d.events_lost = source.routing().stats().events_lost;
  d.events_delivered = nodes_.at(config_.destination().id)->routing().stats().events_delivered;
  for (const auto& [id, node] : nodes_) d.data_dropped += node->routing().stats().data_dropped;
  return d;
}

RunResult Simulation::result() const {
  RunResult r;
  r.records = records_;
  r.packets = engine_.counters();
  r.delivery = delivery();
  r.trace.assign(engine_.trace().begin(), engine_.trace().end());
  r.tx_times.assign(engine_.transmission_times().begin(), engine_.transmission_times().end());
  r.summary = summarize(r.records, r.packets, r.delivery, config_);
  return r;
}

RunResult simulate(const ScenarioConfig& config, bool trace) {
  Simulation sim(config, trace);
  sim.run();
  return sim.result();
}

}  // namespace lorecos
