#pragma once

// AODVjr: RREQ flood with duplicate suppression, destination-only RREP,
// data-driven route refresh and CONNECT keepalives. There are no sequence
// numbers, hop counts, RERRs or precursor lists.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "lorecos/engine.hpp"
#include "lorecos/types.hpp"
#include "lorecos/wire.hpp"

namespace lorecos {

struct RoutingParams {
  SimTime route_lifetime_ms = 5000;
  SimTime rreq_retention_ms = 5000;
  SimTime rrep_wait_ms = 500;
};

struct RouteEntry {
  NodeId target = kNoNode;
  NodeId next_hop = kNoNode;
  SimTime expiry = 0;

  bool usable(SimTime now) const { return now < expiry; }
};

class RouteTable {
 public:
  void upsert(NodeId target, NodeId next_hop, SimTime expiry);
  /// Usable entry for target, if any.
  std::optional<RouteEntry> lookup(NodeId target, SimTime now) const;
  bool refresh(NodeId target, SimTime expiry);
  void invalidate(NodeId target);
  /// Removes entries with expiry <= now; returns how many were removed.
  std::size_t expire(SimTime now);

  std::size_t size() const { return entries_.size(); }
  const std::map<NodeId, RouteEntry>& entries() const { return entries_; }

 private:
  std::map<NodeId, RouteEntry> entries_;
};

struct RreqSeen {
  NodeId orig = kNoNode;
  std::uint32_t rreq_id = 0;
  NodeId first_sender = kNoNode;
  SimTime seen_at = 0;
};

class RreqCache {
 public:
  bool contains(NodeId orig, std::uint32_t rreq_id) const;
  /// False if (orig, rreq_id) was already present.
  bool insert(const RreqSeen& seen);
  void prune(SimTime now, SimTime retention);
  std::size_t size() const { return seen_.size(); }

 private:
  std::map<std::pair<NodeId, std::uint32_t>, RreqSeen> seen_;
};

struct PendingEvent {
  NodeId dest = kNoNode;
  std::uint32_t seq = 0;
  std::vector<std::uint8_t> payload;
  std::optional<Position> location;
  SimTime queued_at = 0;
};

/// Extension points used by the localization layers. Defaults do nothing.
class RoutingHooks {
 public:
  virtual ~RoutingHooks() = default;

  /// Called on a fresh RREQ just before this node re-broadcasts it.
  virtual void stamp_rreq(WirePacket& /*rreq*/) {}
  /// Called at the RREQ originator when the unicast RREP arrives.
  virtual void on_rrep_received(const WirePacket& /*rrep*/) {}
  /// Called for every broadcast RREP (HELLO request, reply or beacon).
  virtual void on_hello(NodeId /*from*/, const WirePacket& /*hello*/) {}
  /// Called at the originator when no RREP arrived within rrep_wait_ms.
  virtual void on_discovery_failed(NodeId /*dest*/) {}
  /// Called at the destination for each EVENT addressed to it.
  virtual void on_event_delivered(const WirePacket& /*event*/) {}
};

struct RoutingStats {
  std::uint64_t rreq_originated = 0;
  std::uint64_t rreq_forwarded = 0;
  std::uint64_t rreq_duplicates = 0;
  std::uint64_t rrep_sent = 0;
  std::uint64_t rrep_dropped = 0;
  std::uint64_t events_sent = 0;      // EVENT transmissions started by this node as source
  std::uint64_t events_delivered = 0;  // EVENTs received as destination
  std::uint64_t data_dropped = 0;      // EVENT/CONNECT lost to a missing route or broken link
  std::uint64_t events_lost = 0;       // own EVENTs that never left or were lost at the first hop
  std::uint64_t connects_sent = 0;
  std::uint64_t link_failures = 0;
};

class AodvjrNode {
 public:
  AodvjrNode(NodeId self, Engine& engine, RoutingParams params, RoutingHooks& hooks);

  NodeId id() const { return self_; }

  /// Entry point for every delivered packet.
  void receive(NodeId from, const WirePacket& packet, bool via_broadcast);

  /// Floods a RREQ for dest with L=0.
  void originate_rreq(NodeId dest);

  /// Sends an event, discovering a route first when none is usable.
  void send_event(NodeId dest, std::uint32_t seq, std::vector<std::uint8_t> payload,
                  std::optional<Position> location);

  /// Destination keepalive: one CONNECT toward every known event source with a route.
  void connect_tick();

  void expire_routes(SimTime now) { routes_.expire(now); }

  bool has_route(NodeId dest) const { return routes_.lookup(dest, engine_.now()).has_value(); }
  bool discovery_pending(NodeId dest) const { return discoveries_.contains(dest); }
  std::optional<NodeId> next_hop(NodeId dest) const;

  const RouteTable& routes() const { return routes_; }
  RouteTable& routes() { return routes_; }
  const RreqCache& rreq_cache() const { return rreq_seen_; }
  const std::set<NodeId>& known_sources() const { return sources_; }
  const std::optional<PendingEvent>& pending(NodeId dest) const;
  const RoutingStats& stats() const { return stats_; }
  std::uint32_t last_rreq_id() const { return rreq_counter_; }

 private:
  void handle_rreq(NodeId from, WirePacket rreq);
  void handle_rrep(NodeId from, const WirePacket& rrep, bool via_broadcast);
  void forward_data(NodeId from, const WirePacket& packet);
  void flush_pending(NodeId dest);
  void on_discovery_timeout(NodeId dest, std::uint32_t rreq_id);
  /// Unicasts along the route to packet.dest, refreshing it; invalidates on link failure.
  bool transmit_data(const WirePacket& packet);

  NodeId self_;
  Engine& engine_;
  RoutingParams params_;
  RoutingHooks& hooks_;

  RouteTable routes_;
  RreqCache rreq_seen_;
  std::uint32_t rreq_counter_ = 0;
  std::map<NodeId, std::uint32_t> discoveries_;  // dest -> outstanding rreq_id
  std::map<NodeId, std::optional<PendingEvent>> pending_;
  std::set<NodeId> sources_;
  RoutingStats stats_;
};

}  // namespace lorecos
