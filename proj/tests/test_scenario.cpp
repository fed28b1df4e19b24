#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "lorecos/scenario.hpp"

using namespace lorecos;

namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = LORECOS_SCENARIO_DIR;

std::string minimal(const std::string& extra_timers = "") {
  return "[timers]\n" + extra_timers +
         "[nodes]\n"
         "1 = 0 0 kn grid\n"
         "2 = 10 0 un destination\n"
         "3 = mobile un source\n"
         "[mobility]\n"
         "waypoints = (5,5) (15,5)\n";
}

int error_line(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Grid, NumberingAndPositions) {
  const auto grid = build_grid();
  ASSERT_EQ(grid.size(), 25u);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      const NodeSpec& n = grid[static_cast<std::size_t>(5 * r + c)];
      EXPECT_EQ(n.id, static_cast<NodeId>(5 * r + c + 1));
      EXPECT_EQ(*n.position, (Position{10.0 * c, 40.0 - 10.0 * r}));
    }
  }
  EXPECT_EQ(*grid[0].position, (Position{0, 40}));
  EXPECT_EQ(*grid[24].position, (Position{40, 0}));
  EXPECT_EQ(canonical_scenario(1, Algorithm::kLorecos).node(25).role, NodeRole::kDestination);
}

TEST(Grid, KnSets) {
  const auto t1 = topology_kn_set(1);
  const auto t2 = topology_kn_set(2);
  const auto t3 = topology_kn_set(3);
  EXPECT_EQ(t1.size(), 25u);
  EXPECT_EQ(t2, (std::set<NodeId>{7, 9, 17, 19}));
  EXPECT_EQ(t3, (std::set<NodeId>{11, 12, 13, 14, 15}));
  EXPECT_TRUE(std::includes(t1.begin(), t1.end(), t3.begin(), t3.end()));
  EXPECT_FALSE(std::includes(t3.begin(), t3.end(), t2.begin(), t2.end()));
  for (NodeId id : t1) EXPECT_TRUE(id >= 1 && id <= 25);
  EXPECT_THROW(topology_kn_set(4), std::invalid_argument);
}

TEST(Grid, CoverageLemmaOnHalfMetreLattice) {
  const auto grid = build_grid();
  const RadioModel radio;
  int worst = 1000;
  for (int i = 0; i <= 80; ++i) {
    for (int j = 0; j <= 80; ++j) {
      const Position p{0.5 * i, 0.5 * j};
      int heard = 0;
      for (const NodeSpec& n : grid) heard += std::hypot(p.x - n.position->x, p.y - n.position->y) <= 12.0;
      ASSERT_GE(heard, 2) << p.x << "," << p.y;
      worst = std::min(worst, heard);
    }
  }
  EXPECT_GE(worst, 2);
}

TEST(Mobility, FirstStepsAndSpeed) {
  const MobilityPath path = canonical_mobility();
  EXPECT_EQ(position_at(path, 0), (Position{15, 15}));
  EXPECT_EQ(position_at(path, 332), (Position{15, 15}));
  EXPECT_EQ(position_at(path, 333), (Position{16, 15}));
  EXPECT_EQ(position_at(path, 666), (Position{17, 15}));

  // Loop length from the waypoints, independently of the library.
  double loop = 0;
  for (std::size_t i = 1; i < path.waypoints.size(); ++i) loop += distance(path.waypoints[i - 1], path.waypoints[i]);
  EXPECT_DOUBLE_EQ(path.length(), loop);
  const auto steps = static_cast<SimTime>(loop);
  EXPECT_EQ(position_at(path, steps * 333), (Position{15, 15}));

  const FieldSpec field;
  Position prev = position_at(path, 0);
  for (SimTime k = 1; k <= 2 * steps; ++k) {
    const Position p = position_at(path, k * 333);
    ASSERT_NEAR(distance(prev, p), 1.0, 1e-9) << k;
    ASSERT_TRUE(field.contains(p));
    ASSERT_EQ(position_at(path, k * 333 + 332), p);
    prev = p;
  }
  // Speed: within any window the number of 1 m steps is floor(t / 333).
  for (SimTime t : {0u, 1000u, 46620u, 99999u}) {
    double travelled = 0;
    for (SimTime k = t / 333; k < (t + 10000) / 333; ++k) {
      travelled += distance(position_at(path, k * 333), position_at(path, (k + 1) * 333));
    }
    EXPECT_NEAR(travelled / 10.0, ((t + 10000) / 333 - t / 333) / 10.0, 1e-9);
    EXPECT_NEAR(travelled / 10.0, 1.0 / 0.333, 0.1);
  }
}

TEST(Mobility, NonCyclicStopsAtEnd) {
  MobilityPath p;
  p.waypoints = {{0, 0}, {3, 0}};
  p.cyclic = false;
  EXPECT_EQ(position_at(p, 333 * 2), (Position{2, 0}));
  EXPECT_EQ(position_at(p, 333 * 10), (Position{3, 0}));
}

TEST(Scenario, CanonicalTopologyOne) {
  const auto c = canonical_scenario(1, Algorithm::kLorecos);
  EXPECT_EQ(c.nodes.size(), 26u);
  EXPECT_EQ(c.kn_ids().size(), 25u);
  EXPECT_EQ(c.source().id, kMobileNodeId);
  EXPECT_TRUE(c.source().mobile());
  EXPECT_FALSE(c.source().knows_location);
  EXPECT_EQ(c.destination().id, kDestinationNodeId);
  EXPECT_EQ(c.duration_ms, 100000u);
  EXPECT_NO_THROW(validate(c));
}

TEST(Scenario, ShippedFilesMatchCanonical) {
  const std::vector<std::pair<std::string, std::pair<int, Algorithm>>> files{
      {"topology1-lorecos", {1, Algorithm::kLorecos}},
      {"topology1-control", {1, Algorithm::kControl}},
      {"topology1-plain", {1, Algorithm::kPlain}},
      {"topology2-lorecos", {2, Algorithm::kLorecos}},
      {"topology3-lorecos", {3, Algorithm::kLorecos}},
  };
  for (const auto& [name, spec] : files) {
    const auto loaded = load_scenario(kScenarios / (name + ".ini"));
    const auto canonical = canonical_scenario(spec.first, spec.second);
    EXPECT_EQ(loaded.name, name);
    EXPECT_EQ(format_scenario(loaded), format_scenario(canonical)) << name;
    EXPECT_TRUE(same_setup(loaded, canonical));
    EXPECT_EQ(loaded.algo, spec.second);
  }
}

TEST(Scenario, FormatParseRoundTrip) {
  for (int t = 1; t <= 3; ++t) {
    const auto c = canonical_scenario(t, Algorithm::kControl);
    const auto back = parse_scenario(format_scenario(c));
    EXPECT_EQ(format_scenario(back), format_scenario(c));
    EXPECT_EQ(back.nodes, c.nodes);
    EXPECT_EQ(back.mobility, c.mobility);
    EXPECT_EQ(back.timers, c.timers);
  }
}

TEST(Scenario, DefaultsApplied) {
  const auto c = parse_scenario(minimal());
  EXPECT_EQ(c.timers.route_lifetime_ms, 5000u);
  EXPECT_EQ(c.timers.hello_wait_T_ms, 100u);
  EXPECT_EQ(c.timers.event_period_ms, 2000u);
  EXPECT_EQ(c.radio.range_m, 12.0);
  EXPECT_EQ(c.algo, Algorithm::kLorecos);
}

TEST(Scenario, ValidationErrors) {
  EXPECT_THROW(parse_scenario(minimal("hello_wait_T_ms = 3000\n")), ScenarioError);
  EXPECT_THROW(parse_scenario(minimal("event_period_ms = 0\n")), ScenarioError);
  EXPECT_THROW(parse_scenario(minimal("beacon_period_ms = -5\n")), ScenarioError);
  EXPECT_THROW(parse_scenario(minimal("bogus_ms = 1\n")), ScenarioError);
  EXPECT_THROW(parse_scenario(minimal() + "[nodes]\n4 = 50 50 un grid\n"), ScenarioError);
  EXPECT_THROW(parse_scenario("[nodes]\n1 = 0 0 kn grid\n2 = 10 0 un destination\n"), ScenarioError);
  EXPECT_THROW(parse_scenario(minimal() + "[radio]\nrange_m = 0\n"), ScenarioError);
  EXPECT_THROW(parse_scenario(minimal() + "[run]\nalgo = magic\n"), ScenarioError);
}

TEST(Scenario, DiagnosticsCarryLineAndField) {
  try {
    parse_scenario("[field]\nwidth = 40\nheight = abc\n");
    FAIL() << "expected an error";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.field(), "field.height");
  }
  EXPECT_EQ(error_line("[field]\nwidth = 40\nwidth = 30\n"), 3);
  EXPECT_EQ(error_line("# comment\n[nowhere]\n"), 2);
  EXPECT_EQ(error_line("[nodes]\n1 = 500 0 kn grid\n"), 2);
  EXPECT_EQ(error_line(minimal("\nhello_wait_T_ms = 3000\n")), 3);
}

TEST(Scenario, OutOfFieldNodeRejected) {
  ScenarioConfig c = canonical_scenario(1, Algorithm::kLorecos);
  c.nodes[0].position = Position{41, 0};
  EXPECT_THROW(validate(c), ScenarioError);
}

TEST(Scenario, LoadMissingFile) { EXPECT_THROW(load_scenario("/nonexistent/x.ini"), ScenarioError); }

TEST(Scenario, SameSetupIgnoresAlgo) {
  EXPECT_TRUE(same_setup(canonical_scenario(1, Algorithm::kLorecos), canonical_scenario(1, Algorithm::kControl)));
  EXPECT_FALSE(same_setup(canonical_scenario(1, Algorithm::kLorecos), canonical_scenario(2, Algorithm::kLorecos)));
}
