#include "lorecos/engine.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <utility>

namespace lorecos {

bool in_range(Position a, Position b, const RadioModel& radio) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  // Squared comparison keeps the boundary exact for integral coordinates.
  return dx * dx + dy * dy <= radio.range_m * radio.range_m;
}

std::string_view to_string(TrafficClass c) {
  switch (c) {
    case TrafficClass::kRreq: return "RREQ";
    case TrafficClass::kRrep: return "RREP";
    case TrafficClass::kHelloRequest: return "HELLO_REQ";
    case TrafficClass::kHelloReply: return "HELLO_REP";
    case TrafficClass::kConnect: return "CONNECT";
    case TrafficClass::kEvent: return "EVENT";
  }
  return "UNKNOWN";
}

TrafficClass classify(const WirePacket& packet, bool broadcast) {
  switch (packet.type) {
    case PacketType::kRreq: return TrafficClass::kRreq;
    case PacketType::kRrep:
      if (!broadcast) return TrafficClass::kRrep;
      return packet.flags.hello ? TrafficClass::kHelloRequest : TrafficClass::kHelloReply;
    case PacketType::kConnect: return TrafficClass::kConnect;
    case PacketType::kEvent: return TrafficClass::kEvent;
  }
  return TrafficClass::kEvent;
}

Engine::Engine(RadioModel radio, std::vector<NodeId> nodes, PositionFn position)
    : radio_(radio), nodes_(std::move(nodes)), position_(std::move(position)) {
  if (!(radio_.range_m > 0.0)) throw std::invalid_argument("radio range must be positive");
  std::sort(nodes_.begin(), nodes_.end());
}

void Engine::push(SimTime at, std::variant<Delivery, Action> action) {
  queue_.push_back(SimEvent{std::max(at, now_), next_seq_++, std::move(action)});
  std::push_heap(queue_.begin(), queue_.end(), Later{});
}

void Engine::schedule_at(SimTime at, Action action) { push(at, std::move(action)); }

namespace {

struct PeriodicTick {
  Engine* engine;
  SimTime period;
  std::shared_ptr<Engine::Action> action;

  void operator()() const {
    engine->schedule_in(period, *this);
    (*action)();
  }
};

}  // namespace

void Engine::schedule_periodic(SimTime first, SimTime period, Action action) {
  if (period == 0) throw std::invalid_argument("period must be positive");
  schedule_at(first, PeriodicTick{this, period, std::make_shared<Action>(std::move(action))});
}

void Engine::record_transmission(NodeId sender, std::optional<NodeId> receiver, const WirePacket& packet,
                                 bool broadcast) {
  counters_.add(classify(packet, broadcast));
  tx_times_.push_back(now_);
  if (trace_enabled_) trace_.push_back(TraceRow{now_, sender, receiver, packet});
}

std::size_t Engine::broadcast(NodeId sender, const WirePacket& packet) {
  const auto bytes = encode(packet);
  record_transmission(sender, std::nullopt, packet, true);
  const Position from = position_(sender, now_);
  std::size_t scheduled = 0;
  for (NodeId id : nodes_) {
    if (id == sender || !in_range(from, position_(id, now_), radio_)) continue;
    push(now_ + radio_.hop_delay_ms, Delivery{sender, id, true, bytes});
    ++scheduled;
  }
  return scheduled;
}

bool Engine::unicast(NodeId sender, NodeId next_hop, const WirePacket& packet) {
  auto bytes = encode(packet);
  record_transmission(sender, next_hop, packet, false);
  if (next_hop == sender || !in_range(position_(sender, now_), position_(next_hop, now_), radio_)) {
    return false;
  }
  push(now_ + radio_.hop_delay_ms, Delivery{sender, next_hop, false, std::move(bytes)});
  return true;
}

void Engine::dispatch(Delivery& delivery) {
  auto decoded = decode(delivery.bytes);
  if (auto* packet = std::get_if<WirePacket>(&decoded)) {
    ++deliveries_;
    if (receive_) receive_(delivery.receiver, delivery.sender, *packet, delivery.via_broadcast);
  } else {
    ++decode_failures_;
  }
}

void Engine::run_until(SimTime t_end) {
  while (!queue_.empty() && queue_.front().time <= t_end) {
    std::pop_heap(queue_.begin(), queue_.end(), Later{});
    SimEvent event = std::move(queue_.back());
    queue_.pop_back();
    now_ = event.time;
    ++executed_;
    if (auto* delivery = std::get_if<Delivery>(&event.action)) {
      dispatch(*delivery);
    } else {
      std::get<Action>(event.action)();
    }
  }
  now_ = std::max(now_, t_end);
}

}  // namespace lorecos
