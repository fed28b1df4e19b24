#pragma once

// Field, node roster, mobility and timers for one simulation run, plus the
// INI-style scenario file format:
//
//   [field]     width, height
//   [radio]     range_m, hop_delay_ms
//   [timers]    event_period_ms, connect_period_ms, hello_wait_T_ms,
//               beacon_period_ms, route_lifetime_ms, rrep_wait_ms,
//               rreq_retention_ms, event_start_ms, connect_start_ms
//   [nodes]     <id> = <x> <y> <kn|un> <grid|source|destination>
//               <id> = mobile <kn|un> <role>
//   [mobility]  waypoints = (x,y) (x,y) ..., cyclic, step_m, step_ms
//   [run]       name, algo (lorecos|control|plain), duration_ms, out_dir

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lorecos/engine.hpp"
#include "lorecos/types.hpp"

namespace lorecos {

struct FieldSpec {
  double width = 40.0;
  double height = 40.0;

  bool contains(Position p) const { return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height; }
};

enum class NodeRole { kGrid, kSource, kDestination };

std::string_view to_string(NodeRole role);

struct NodeSpec {
  NodeId id = kNoNode;
  std::optional<Position> position;  // nullopt: follows the mobility path
  bool knows_location = false;
  NodeRole role = NodeRole::kGrid;

  bool mobile() const { return !position.has_value(); }
  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct MobilityPath {
  std::vector<Position> waypoints;
  double step_m = 1.0;
  SimTime step_ms = 333;
  bool cyclic = true;

  /// Length of the traversed polyline, including the closing leg when cyclic.
  double length() const;
  friend bool operator==(const MobilityPath&, const MobilityPath&) = default;
};

enum class Algorithm { kLorecos, kControl, kPlain };

std::string_view to_string(Algorithm algo);
std::optional<Algorithm> parse_algorithm(std::string_view text);

struct Timers {
  SimTime event_period_ms = 2000;
  SimTime connect_period_ms = 2000;
  SimTime hello_wait_T_ms = 100;
  SimTime beacon_period_ms = 1000;
  SimTime route_lifetime_ms = 5000;
  SimTime rrep_wait_ms = 500;
  SimTime rreq_retention_ms = 5000;
  SimTime event_start_ms = 0;
  SimTime connect_start_ms = 1000;

  friend bool operator==(const Timers&, const Timers&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  FieldSpec field;
  RadioModel radio;
  std::vector<NodeSpec> nodes;
  MobilityPath mobility;
  Algorithm algo = Algorithm::kLorecos;
  Timers timers;
  SimTime duration_ms = 100000;
  std::string out_dir;

  const NodeSpec& node(NodeId id) const;
  const NodeSpec& source() const;
  const NodeSpec& destination() const;
  std::set<NodeId> kn_ids() const;
};

/// Configuration problem, with the offending line (0 when not from a file) and field.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, std::string message, int line = 0);

  const std::string& field() const { return field_; }
  const std::string& message() const { return message_; }
  int line() const { return line_; }

 private:
  std::string field_;
  std::string message_;
  int line_;
};

/// 25 fixed nodes on a 10 m grid, numbered row-major from the top-left:
/// id = 5r + c + 1 at (10c, 40 - 10r). Node 25 at (40,0) is the destination.
std::vector<NodeSpec> build_grid();

/// KN ids for the three reference layouts: 1 -> all 25, 2 -> {7, 9, 17, 19},
/// 3 -> the middle row {11..15}. Throws std::invalid_argument otherwise.
std::set<NodeId> topology_kn_set(int kind);

inline constexpr NodeId kMobileNodeId = 26;
inline constexpr NodeId kDestinationNodeId = 25;

/// Serpentine loop starting at (15,15).
MobilityPath canonical_mobility();

/// Position after floor(t / step_ms) steps of step_m along the path.
Position position_at(const MobilityPath& path, SimTime t);

/// Reference scenario for a topology (1..3) and algorithm.
ScenarioConfig canonical_scenario(int topology, Algorithm algo);

/// Throws ScenarioError on the first violated invariant.
void validate(const ScenarioConfig& config);

ScenarioConfig parse_scenario(std::string_view text, std::string default_name = "scenario");
ScenarioConfig load_scenario(const std::filesystem::path& file);

/// Serializes in the format parse_scenario reads back.
std::string format_scenario(const ScenarioConfig& config);

/// True when two scenarios differ only in algorithm, duration, name and output.
bool same_setup(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace lorecos
