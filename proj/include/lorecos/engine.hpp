#pragma once

// Discrete-event scheduler with an ideal disc radio.
//
// Events run in (time, insertion order). A broadcast reaches every other node
// within range, in ascending node id; a unicast reaches its next hop only if
// it is in range at transmission time. Every transmission is counted once,
// whether or not anybody hears it.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lorecos/types.hpp"
#include "lorecos/wire.hpp"

namespace lorecos {

struct RadioModel {
  double range_m = 12.0;
  SimTime hop_delay_ms = 1;
};

/// Disc model: true iff the two points are at most range_m apart (inclusive).
bool in_range(Position a, Position b, const RadioModel& radio);

enum class TrafficClass : std::size_t {
  kRreq = 0,
  kRrep,          // unicast route reply
  kHelloRequest,  // broadcast RREP, H=1
  kHelloReply,    // broadcast RREP, H=0 (LORECOS replies and CONTROL beacons)
  kConnect,
  kEvent,
};

inline constexpr std::size_t kTrafficClassCount = 6;

std::string_view to_string(TrafficClass c);

TrafficClass classify(const WirePacket& packet, bool broadcast);

struct PacketCounters {
  std::array<std::uint64_t, kTrafficClassCount> by_class{};
  std::uint64_t total = 0;

  void add(TrafficClass c) {
    ++by_class[static_cast<std::size_t>(c)];
    ++total;
  }
  std::uint64_t operator[](TrafficClass c) const { return by_class[static_cast<std::size_t>(c)]; }
};

/// One row per transmission. receiver is absent for broadcasts.
struct TraceRow {
  SimTime time = 0;
  NodeId sender = kNoNode;
  std::optional<NodeId> receiver;
  WirePacket packet;
};

class Engine {
 public:
  using PositionFn = std::function<Position(NodeId, SimTime)>;
  using ReceiveFn = std::function<void(NodeId receiver, NodeId sender, const WirePacket&, bool via_broadcast)>;
  using Action = std::function<void()>;

  Engine(RadioModel radio, std::vector<NodeId> nodes, PositionFn position);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void set_receiver(ReceiveFn receive) { receive_ = std::move(receive); }
  void enable_trace(bool on) { trace_enabled_ = on; }

  SimTime now() const { return now_; }
  const RadioModel& radio() const { return radio_; }
  std::span<const NodeId> nodes() const { return nodes_; }
  Position position_of(NodeId id, SimTime at) const { return position_(id, at); }
  Position position_of(NodeId id) const { return position_(id, now_); }

  /// Schedules `action` at absolute time `at` (clamped to now).
  void schedule_at(SimTime at, Action action);
  void schedule_in(SimTime delay, Action action) { schedule_at(now_ + delay, std::move(action)); }
  /// Runs `action` at `first`, then every `period` ms for the rest of the run.
  void schedule_periodic(SimTime first, SimTime period, Action action);

  /// Returns the number of deliveries scheduled.
  std::size_t broadcast(NodeId sender, const WirePacket& packet);

  /// Returns false when next_hop is out of range; nothing is delivered then.
  bool unicast(NodeId sender, NodeId next_hop, const WirePacket& packet);

  /// Executes every event with time <= t_end.
  void run_until(SimTime t_end);

  bool idle() const { return queue_.empty(); }
  std::size_t executed() const { return executed_; }

  const PacketCounters& counters() const { return counters_; }
  std::span<const TraceRow> trace() const { return trace_; }
  /// Time of every transmission, in execution order.
  std::span<const SimTime> transmission_times() const { return tx_times_; }
  std::uint64_t deliveries() const { return deliveries_; }
  std::uint64_t decode_failures() const { return decode_failures_; }

 private:
  struct Delivery {
    NodeId sender;
    NodeId receiver;
    bool via_broadcast;
    std::vector<std::uint8_t> bytes;
  };

  struct SimEvent {
    SimTime time;
    std::uint64_t seq;
    std::variant<Delivery, Action> action;
  };

  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  void push(SimTime at, std::variant<Delivery, Action> action);
  void record_transmission(NodeId sender, std::optional<NodeId> receiver, const WirePacket& packet,
                           bool broadcast);
  void dispatch(Delivery& delivery);

  RadioModel radio_;
  std::vector<NodeId> nodes_;
  PositionFn position_;
  ReceiveFn receive_;

  std::vector<SimEvent> queue_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::size_t executed_ = 0;

  PacketCounters counters_;
  bool trace_enabled_ = false;
  std::vector<TraceRow> trace_;
  std::vector<SimTime> tx_times_;
  std::uint64_t deliveries_ = 0;
  std::uint64_t decode_failures_ = 0;
};

}  // namespace lorecos
