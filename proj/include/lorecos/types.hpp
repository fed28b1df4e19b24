#pragma once

#include <cmath>
#include <cstdint>

namespace lorecos {

/// Node address. Grid nodes are numbered from 1; 0 is the broadcast/unset id.
using NodeId = std::uint32_t;

inline constexpr NodeId kNoNode = 0;

/// Milliseconds since simulation start.
using SimTime = std::uint64_t;

/// Planar position in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(Position a, Position b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline bool is_finite(Position p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

}  // namespace lorecos
