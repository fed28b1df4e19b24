#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "lorecos/types.hpp"

namespace lorecos {

enum class EstimateKind {
  kCentroid,    // CLOC
  kHello,       // HLOC
  kDiscovered,  // DLOC
};

/// Report label: CLOC, HLOC or DLOC.
std::string_view label(EstimateKind kind);
std::optional<EstimateKind> parse_estimate_kind(std::string_view text);

struct LocationEstimate {
  EstimateKind kind = EstimateKind::kCentroid;
  Position position;
  SimTime at = 0;
};

/// Arithmetic mean of the points. Throws std::invalid_argument when empty.
Position centroid(std::span<const Position> points);

/// Outcome of one localization cycle at the event source.
struct EstimateRecord {
  SimTime t = 0;
  Position true_pos;
  std::optional<LocationEstimate> estimate;
  /// Euclidean error rounded to 1e-4 m, the precision reports carry; 0 on failure.
  double error_m = 0.0;

  bool failed() const { return !estimate.has_value(); }
};

EstimateRecord make_record(SimTime t, Position true_pos, std::optional<LocationEstimate> estimate);

/// Rounds to four decimals, the precision every report uses.
double round4(double value);

}  // namespace lorecos
