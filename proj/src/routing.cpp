#include "lorecos/routing.hpp"

namespace lorecos {

void RouteTable::upsert(NodeId target, NodeId next_hop, SimTime expiry) {
  entries_[target] = RouteEntry{target, next_hop, expiry};
}

std::optional<RouteEntry> RouteTable::lookup(NodeId target, SimTime now) const {
  const auto it = entries_.find(target);
  if (it == entries_.end() || !it->second.usable(now)) return std::nullopt;
  return it->second;
}

bool RouteTable::refresh(NodeId target, SimTime expiry) {
  const auto it = entries_.find(target);
  if (it == entries_.end()) return false;
  it->second.expiry = std::max(it->second.expiry, expiry);
  return true;
}

void RouteTable::invalidate(NodeId target) { entries_.erase(target); }

std::size_t RouteTable::expire(SimTime now) {
  return std::erase_if(entries_, [now](const auto& kv) { return kv.second.expiry <= now; });
}

bool RreqCache::contains(NodeId orig, std::uint32_t rreq_id) const {
  return seen_.contains({orig, rreq_id});
}

bool RreqCache::insert(const RreqSeen& seen) {
  return seen_.try_emplace({seen.orig, seen.rreq_id}, seen).second;
}

void RreqCache::prune(SimTime now, SimTime retention) {
  std::erase_if(seen_, [&](const auto& kv) { return kv.second.seen_at + retention <= now; });
}

AodvjrNode::AodvjrNode(NodeId self, Engine& engine, RoutingParams params, RoutingHooks& hooks)
    : self_(self), engine_(engine), params_(params), hooks_(hooks) {}

std::optional<NodeId> AodvjrNode::next_hop(NodeId dest) const {
  if (auto route = routes_.lookup(dest, engine_.now())) return route->next_hop;
  return std::nullopt;
}

const std::optional<PendingEvent>& AodvjrNode::pending(NodeId dest) const {
  static const std::optional<PendingEvent> kNone;
  const auto it = pending_.find(dest);
  return it == pending_.end() ? kNone : it->second;
}

void AodvjrNode::receive(NodeId from, const WirePacket& packet, bool via_broadcast) {
  const SimTime now = engine_.now();
  routes_.expire(now);
  rreq_seen_.prune(now, params_.rreq_retention_ms);

  switch (packet.type) {
    case PacketType::kRreq:
      if (via_broadcast) handle_rreq(from, packet);
      break;
    case PacketType::kRrep:
      handle_rrep(from, packet, via_broadcast);
      break;
    case PacketType::kConnect:
    case PacketType::kEvent:
      if (!via_broadcast) forward_data(from, packet);
      break;
  }
}

void AodvjrNode::originate_rreq(NodeId dest) {
  if (dest == self_ || has_route(dest)) return;
  const SimTime now = engine_.now();
  const std::uint32_t id = ++rreq_counter_;
  rreq_seen_.insert(RreqSeen{self_, id, self_, now});
  discoveries_[dest] = id;
  ++stats_.rreq_originated;
  engine_.broadcast(self_, make_rreq(self_, dest, id));
  engine_.schedule_in(params_.rrep_wait_ms, [this, dest, id]() { on_discovery_timeout(dest, id); });
}

void AodvjrNode::handle_rreq(NodeId from, WirePacket rreq) {
  const SimTime now = engine_.now();
  if (!rreq_seen_.insert(RreqSeen{rreq.orig, rreq.rreq_id, from, now})) {
    ++stats_.rreq_duplicates;
    return;
  }
  routes_.upsert(rreq.orig, from, now + params_.route_lifetime_ms);

  if (rreq.dest == self_) {
    sources_.insert(rreq.orig);
    // The reply mirrors L and (xloc, yloc) of this first copy.
    WirePacket rrep = make_rrep(rreq.orig, self_);
    if (rreq.flags.location) rrep.set_location(rreq.location());
    ++stats_.rrep_sent;
    if (!engine_.unicast(self_, from, rrep)) {
      ++stats_.link_failures;
      ++stats_.rrep_dropped;
      routes_.invalidate(rreq.orig);
    }
    return;
  }

  hooks_.stamp_rreq(rreq);
  ++stats_.rreq_forwarded;
  engine_.broadcast(self_, rreq);
}

void AodvjrNode::handle_rrep(NodeId from, const WirePacket& rrep, bool via_broadcast) {
  if (via_broadcast) {
    hooks_.on_hello(from, rrep);
    return;
  }
  const SimTime now = engine_.now();
  routes_.upsert(rrep.dest, from, now + params_.route_lifetime_ms);

  if (rrep.orig == self_) {
    if (auto it = discoveries_.find(rrep.dest); it != discoveries_.end()) discoveries_.erase(it);
    hooks_.on_rrep_received(rrep);
    flush_pending(rrep.dest);
    return;
  }

  const auto back = routes_.lookup(rrep.orig, now);
  if (!back) {
    ++stats_.rrep_dropped;
    return;
  }
  routes_.refresh(rrep.orig, now + params_.route_lifetime_ms);
  if (!engine_.unicast(self_, back->next_hop, rrep)) {
    ++stats_.link_failures;
    ++stats_.rrep_dropped;
    routes_.invalidate(rrep.orig);
  }
}

bool AodvjrNode::transmit_data(const WirePacket& packet) {
  const SimTime now = engine_.now();
  const auto route = routes_.lookup(packet.dest, now);
  if (!route) return false;
  routes_.refresh(packet.dest, now + params_.route_lifetime_ms);
  if (engine_.unicast(self_, route->next_hop, packet)) return true;
  ++stats_.link_failures;
  routes_.invalidate(packet.dest);
  return false;
}

void AodvjrNode::forward_data(NodeId from, const WirePacket& packet) {
  const SimTime now = engine_.now();
  const SimTime expiry = now + params_.route_lifetime_ms;

  if (packet.dest == self_) {
    if (packet.type == PacketType::kEvent) {
      if (auto back = routes_.lookup(packet.orig, now); back && back->next_hop == from) {
        routes_.refresh(packet.orig, expiry);
      }
      sources_.insert(packet.orig);
      ++stats_.events_delivered;
      hooks_.on_event_delivered(packet);
    } else {
      // A CONNECT at the event source keeps its forward route alive.
      routes_.upsert(packet.orig, from, expiry);
    }
    return;
  }

  if (auto back = routes_.lookup(packet.orig, now); back && back->next_hop == from) {
    routes_.refresh(packet.orig, expiry);
  }
  if (!transmit_data(packet)) ++stats_.data_dropped;
}

void AodvjrNode::send_event(NodeId dest, std::uint32_t seq, std::vector<std::uint8_t> payload,
                            std::optional<Position> location) {
  const SimTime now = engine_.now();
  routes_.expire(now);

  if (has_route(dest)) {
    WirePacket event = make_event(self_, dest, seq, std::move(payload));
    if (location) event.set_location(*location);
    ++stats_.events_sent;
    if (!transmit_data(event)) ++stats_.events_lost;
    return;
  }

  auto& slot = pending_[dest];
  if (slot) ++stats_.events_lost;  // superseded by the newer event
  slot = PendingEvent{dest, seq, std::move(payload), location, now};
  if (!discovery_pending(dest)) originate_rreq(dest);
}

void AodvjrNode::flush_pending(NodeId dest) {
  auto it = pending_.find(dest);
  if (it == pending_.end() || !it->second) return;
  PendingEvent pending = std::move(*it->second);
  it->second.reset();

  WirePacket event = make_event(self_, dest, pending.seq, std::move(pending.payload));
  if (pending.location) event.set_location(*pending.location);
  ++stats_.events_sent;
  if (!transmit_data(event)) ++stats_.events_lost;
}

void AodvjrNode::on_discovery_timeout(NodeId dest, std::uint32_t rreq_id) {
  const auto it = discoveries_.find(dest);
  if (it == discoveries_.end() || it->second != rreq_id) return;
  discoveries_.erase(it);
  if (auto p = pending_.find(dest); p != pending_.end() && p->second) {
    p->second.reset();
    ++stats_.events_lost;
  }
  hooks_.on_discovery_failed(dest);
}

void AodvjrNode::connect_tick() {
  for (NodeId source : sources_) {
    if (!has_route(source)) continue;
    ++stats_.connects_sent;
    if (!transmit_data(make_connect(self_, source))) ++stats_.data_dropped;
  }
}

}  // namespace lorecos
