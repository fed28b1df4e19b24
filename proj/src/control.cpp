#include "lorecos/control.hpp"

namespace lorecos {

std::vector<Position> BeaconBuffer::positions() const {
  std::vector<Position> out;
  out.reserve(beacons_.size());
  for (const auto& [sender, position] : beacons_) out.push_back(position);
  return out;
}

std::optional<LocationEstimate> control_estimate(BeaconBuffer& buffer, SimTime at) {
  if (buffer.empty()) return std::nullopt;
  const auto points = buffer.positions();
  buffer.clear();
  return LocationEstimate{EstimateKind::kCentroid, centroid(points), at};
}

void ControlNode::beacon_tick() {
  if (!knows_location()) return;
  ++beacons_sent_;
  engine_.broadcast(id(), make_hello_reply(id(), kNoNode, position()));
}

void ControlNode::start_event_cycle(NodeId dest) {
  next_cycle();
  const auto estimate = control_estimate(buffer_, engine_.now());
  record(estimate);
  send_cycle_event(dest, estimate ? std::optional<Position>(estimate->position) : std::nullopt);
}

void ControlNode::on_hello(NodeId from, const WirePacket& hello) {
  // Only event sources localize; fixed nodes ignore each other's beacons.
  if (!profile().is_source || hello.flags.hello || !hello.flags.location) return;
  buffer_.add(from, hello.location());
}

}  // namespace lorecos
