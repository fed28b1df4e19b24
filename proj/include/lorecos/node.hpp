#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lorecos/engine.hpp"
#include "lorecos/estimate.hpp"
#include "lorecos/routing.hpp"

namespace lorecos {

struct NodeProfile {
  NodeId id = kNoNode;
  bool knows_location = false;  // KN when true, UN otherwise
  bool is_source = false;
  bool is_destination = false;
};

/// A sensor node: the AODVjr stack plus whatever localization strategy a
/// subclass layers on top through the routing hooks.
class SensorNode : public RoutingHooks {
 public:
  using RecordSink = std::function<void(const EstimateRecord&)>;

  SensorNode(NodeProfile profile, Engine& engine, RoutingParams params, RecordSink sink);

  SensorNode(const SensorNode&) = delete;
  SensorNode& operator=(const SensorNode&) = delete;

  NodeId id() const { return profile_.id; }
  const NodeProfile& profile() const { return profile_; }
  bool knows_location() const { return profile_.knows_location; }
  Position position() const { return engine_.position_of(profile_.id); }

  AodvjrNode& routing() { return routing_; }
  const AodvjrNode& routing() const { return routing_; }

  void receive(NodeId from, const WirePacket& packet, bool via_broadcast) {
    routing_.receive(from, packet, via_broadcast);
  }

  /// One reporting cycle at an event source: localize, then send the event.
  virtual void start_event_cycle(NodeId dest) = 0;

  std::uint32_t cycles_started() const { return event_seq_; }

 protected:
  /// Records the outcome of this cycle against the node's true position now.
  void record(std::optional<LocationEstimate> estimate);
  /// Sends the current cycle's event, with the location when one is given.
  void send_cycle_event(NodeId dest, std::optional<Position> location);
  std::uint32_t next_cycle() { return ++event_seq_; }

  Engine& engine_;

 private:
  NodeProfile profile_;
  AodvjrNode routing_;
  RecordSink sink_;
  std::uint32_t event_seq_ = 0;
};

/// Plain AODVjr source: events carry no location.
class PlainNode final : public SensorNode {
 public:
  using SensorNode::SensorNode;

  void start_event_cycle(NodeId dest) override;
};

}  // namespace lorecos
