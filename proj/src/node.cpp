#include "lorecos/node.hpp"

#include <utility>

namespace lorecos {

SensorNode::SensorNode(NodeProfile profile, Engine& engine, RoutingParams params, RecordSink sink)
    : engine_(engine), profile_(profile), routing_(profile.id, engine, params, *this), sink_(std::move(sink)) {}

void SensorNode::record(std::optional<LocationEstimate> estimate) {
  if (sink_) sink_(make_record(engine_.now(), position(), estimate));
}

void SensorNode::send_cycle_event(NodeId dest, std::optional<Position> location) {
  // Four-byte reading; its content is opaque to the network.
  const std::uint32_t seq = event_seq_;
  std::vector<std::uint8_t> payload{static_cast<std::uint8_t>(seq >> 24), static_cast<std::uint8_t>(seq >> 16),
                                    static_cast<std::uint8_t>(seq >> 8), static_cast<std::uint8_t>(seq)};
  routing_.send_event(dest, seq, std::move(payload), location);
}

void PlainNode::start_event_cycle(NodeId dest) {
  next_cycle();
  record(std::nullopt);
  send_cycle_event(dest, std::nullopt);
}

}  // namespace lorecos
