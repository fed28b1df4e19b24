#pragma once

// LORECOS localization on top of AODVjr.
//
// Phase 1: the first KN that forwards a RREQ with L=0 stamps its own position
// and sets L; the destination mirrors it in the RREP and the originator keeps
// it as DISCOVERED-LOC. Phase 2: the source broadcasts a HELLO request and
// collects replies from neighbouring KNs for T ms. Phase 3: the event goes
// out carrying the chosen estimate.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "lorecos/estimate.hpp"
#include "lorecos/node.hpp"
#include "lorecos/wire.hpp"

namespace lorecos {

struct HelloReply {
  NodeId sender = kNoNode;
  Position position;
};

/// Stamps a KN's own position into a RREQ that does not carry one yet.
void stamp_rreq(WirePacket& rreq, bool knows_location, Position own);

/// Picks the estimate for a closed HELLO round:
///   >= 2 replies       -> Centroid of the reply positions
///   exactly 1 reply    -> Hello, the replier's position
///   none, discovered   -> Discovered
///   none, no discovery -> nullopt (estimation fails)
std::optional<LocationEstimate> finalize_estimate(std::span<const HelloReply> window,
                                                  const std::optional<Position>& discovered, SimTime at);

/// Per-source localization state. All values start invalid.
class LocState {
 public:
  /// Unicast RREP at the originator: L=1 makes its location DISCOVERED-LOC,
  /// L=0 invalidates DISCOVERED-LOC.
  void on_rrep_received(const WirePacket& rrep);
  void invalidate_discovered() { discovered_.reset(); }
  const std::optional<Position>& discovered() const { return discovered_; }

  void open_round(SimTime deadline);
  /// Accepted only while a round is open and from a sender not yet heard.
  bool record_reply(NodeId sender, Position position);
  /// Ends the round and hands back what it collected.
  std::vector<HelloReply> close_round();

  bool round_active() const { return active_; }
  SimTime window_deadline() const { return deadline_; }
  std::span<const HelloReply> window() const { return window_; }

 private:
  std::optional<Position> discovered_;
  std::vector<HelloReply> window_;
  std::set<NodeId> heard_;
  SimTime deadline_ = 0;
  bool active_ = false;
};

class LorecosNode final : public SensorNode {
 public:
  LorecosNode(NodeProfile profile, Engine& engine, RoutingParams params, RecordSink sink, SimTime hello_wait_ms);

  /// Phase 1 when no route is usable, then Phases 2 and 3.
  void start_event_cycle(NodeId dest) override;
  /// Opens a HELLO round and schedules its finalization T ms later.
  void begin_localization();

  const LocState& loc_state() const { return loc_; }
  std::uint64_t hello_requests_sent() const { return hello_requests_sent_; }
  std::uint64_t hello_replies_sent() const { return hello_replies_sent_; }

  void stamp_rreq(WirePacket& rreq) override;
  void on_rrep_received(const WirePacket& rrep) override;
  void on_hello(NodeId from, const WirePacket& hello) override;
  void on_discovery_failed(NodeId dest) override;

 private:
  void on_hello_request(NodeId from);
  void on_hello_reply(NodeId from, const WirePacket& reply);
  void finalize();
  void emit_event_with_location(const std::optional<LocationEstimate>& estimate);

  SimTime hello_wait_ms_;
  LocState loc_;
  NodeId cycle_dest_ = kNoNode;
  bool awaiting_route_ = false;
  std::uint64_t hello_requests_sent_ = 0;
  std::uint64_t hello_replies_sent_ = 0;
};

}  // namespace lorecos
