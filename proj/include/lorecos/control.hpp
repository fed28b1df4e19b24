#pragma once

// CONTROL-AODVjr: localization decoupled from routing. Every fixed KN
// broadcasts its position once per beacon period; the source averages the
// beacons it heard since its previous estimate, just before each event.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lorecos/estimate.hpp"
#include "lorecos/node.hpp"

namespace lorecos {

/// Latest beacon per sender since the last estimate.
class BeaconBuffer {
 public:
  void add(NodeId sender, Position position) { beacons_[sender] = position; }
  void clear() { beacons_.clear(); }
  bool empty() const { return beacons_.empty(); }
  std::size_t size() const { return beacons_.size(); }
  bool contains(NodeId sender) const { return beacons_.contains(sender); }
  const std::map<NodeId, Position>& entries() const { return beacons_; }
  std::vector<Position> positions() const;

 private:
  std::map<NodeId, Position> beacons_;
};

/// Centroid of the buffered beacons (kind Centroid whatever their count),
/// clearing the buffer; nullopt when nothing was heard.
std::optional<LocationEstimate> control_estimate(BeaconBuffer& buffer, SimTime at);

class ControlNode final : public SensorNode {
 public:
  using SensorNode::SensorNode;

  /// Periodic location beacon; only KNs send one.
  void beacon_tick();
  void start_event_cycle(NodeId dest) override;
  void on_hello(NodeId from, const WirePacket& hello) override;

  const BeaconBuffer& buffer() const { return buffer_; }
  std::uint64_t beacons_sent() const { return beacons_sent_; }

 private:
  BeaconBuffer buffer_;
  std::uint64_t beacons_sent_ = 0;
};

}  // namespace lorecos
