#include "lorecos/lorecos.hpp"

#include <utility>

namespace lorecos {

void stamp_rreq(WirePacket& rreq, bool knows_location, Position own) {
  if (rreq.type != PacketType::kRreq || !knows_location || rreq.flags.location) return;
  rreq.set_location(own);
}

std::optional<LocationEstimate> finalize_estimate(std::span<const HelloReply> window,
                                                  const std::optional<Position>& discovered, SimTime at) {
  if (window.size() >= 2) {
    std::vector<Position> points;
    points.reserve(window.size());
    for (const HelloReply& reply : window) points.push_back(reply.position);
    return LocationEstimate{EstimateKind::kCentroid, centroid(points), at};
  }
  if (window.size() == 1) return LocationEstimate{EstimateKind::kHello, window.front().position, at};
  if (discovered) return LocationEstimate{EstimateKind::kDiscovered, *discovered, at};
  return std::nullopt;
}

void LocState::on_rrep_received(const WirePacket& rrep) {
  if (rrep.flags.location) {
    discovered_ = rrep.location();
  } else {
    discovered_.reset();
  }
}

void LocState::open_round(SimTime deadline) {
  window_.clear();
  heard_.clear();
  deadline_ = deadline;
  active_ = true;
}

bool LocState::record_reply(NodeId sender, Position position) {
  if (!active_ || !heard_.insert(sender).second) return false;
  window_.push_back(HelloReply{sender, position});
  return true;
}

std::vector<HelloReply> LocState::close_round() {
  active_ = false;
  heard_.clear();
  return std::exchange(window_, {});
}

LorecosNode::LorecosNode(NodeProfile profile, Engine& engine, RoutingParams params, RecordSink sink,
                         SimTime hello_wait_ms)
    : SensorNode(profile, engine, params, std::move(sink)), hello_wait_ms_(hello_wait_ms) {}

void LorecosNode::start_event_cycle(NodeId dest) {
  next_cycle();
  cycle_dest_ = dest;
  if (routing().has_route(dest)) {
    // No discovery this cycle: DISCOVERED-LOC keeps its value and validity.
    begin_localization();
    return;
  }
  awaiting_route_ = true;
  if (!routing().discovery_pending(dest)) routing().originate_rreq(dest);
}

void LorecosNode::begin_localization() {
  loc_.open_round(engine_.now() + hello_wait_ms_);
  ++hello_requests_sent_;
  engine_.broadcast(id(), make_hello_request(id()));
  engine_.schedule_in(hello_wait_ms_, [this]() { finalize(); });
}

void LorecosNode::stamp_rreq(WirePacket& rreq) { lorecos::stamp_rreq(rreq, knows_location(), position()); }

void LorecosNode::on_rrep_received(const WirePacket& rrep) {
  loc_.on_rrep_received(rrep);
  if (awaiting_route_ && rrep.dest == cycle_dest_) {
    awaiting_route_ = false;
    begin_localization();
  }
}

void LorecosNode::on_discovery_failed(NodeId dest) {
  loc_.invalidate_discovered();
  if (awaiting_route_ && dest == cycle_dest_) {
    awaiting_route_ = false;
    begin_localization();
  }
}

void LorecosNode::on_hello(NodeId from, const WirePacket& hello) {
  if (hello.flags.hello) {
    on_hello_request(from);
  } else {
    on_hello_reply(from, hello);
  }
}

void LorecosNode::on_hello_request(NodeId from) {
  if (!knows_location()) return;
  ++hello_replies_sent_;
  engine_.broadcast(id(), make_hello_reply(id(), from, position()));
}

void LorecosNode::on_hello_reply(NodeId from, const WirePacket& reply) {
  // Replies are addressed to the requester; overheard ones are not ours to use.
  if (reply.dest != id() || !reply.flags.location) return;
  loc_.record_reply(from, reply.location());
}

void LorecosNode::finalize() {
  const auto window = loc_.close_round();
  const auto estimate = finalize_estimate(window, loc_.discovered(), engine_.now());
  record(estimate);
  emit_event_with_location(estimate);
}

void LorecosNode::emit_event_with_location(const std::optional<LocationEstimate>& estimate) {
  std::optional<Position> location;
  if (estimate) location = estimate->position;
  send_cycle_event(cycle_dest_, location);
}

}  // namespace lorecos
