#include "lorecos/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lorecos {

std::string_view label(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::kCentroid: return "CLOC";
    case EstimateKind::kHello: return "HLOC";
    case EstimateKind::kDiscovered: return "DLOC";
  }
  return "?";
}

std::optional<EstimateKind> parse_estimate_kind(std::string_view text) {
  if (text == "CLOC") return EstimateKind::kCentroid;
  if (text == "HLOC") return EstimateKind::kHello;
  if (text == "DLOC") return EstimateKind::kDiscovered;
  return std::nullopt;
}

Position centroid(std::span<const Position> points) {
  if (points.empty()) throw std::invalid_argument("centroid of an empty point set");
  // Summing in a canonical order makes the result exactly permutation-invariant.
  std::vector<Position> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Position& a, const Position& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  double sx = 0.0;
  double sy = 0.0;
  for (const Position& p : sorted) {
    sx += p.x;
    sy += p.y;
  }
  const auto n = static_cast<double>(points.size());
  return {sx / n, sy / n};
}

double round4(double value) { return std::round(value * 1e4) / 1e4; }

EstimateRecord make_record(SimTime t, Position true_pos, std::optional<LocationEstimate> estimate) {
  EstimateRecord record{t, true_pos, estimate, 0.0};
  if (estimate) record.error_m = round4(distance(estimate->position, true_pos));
  return record;
}

}  // namespace lorecos
