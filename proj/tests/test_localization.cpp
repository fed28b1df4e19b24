#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "lorecos/control.hpp"
#include "lorecos/estimate.hpp"
#include "lorecos/lorecos.hpp"
#include "lorecos/simulation.hpp"

using namespace lorecos;

namespace {

// Independent mean: Kahan-compensated sum in long double.
Position mean_oracle(const std::vector<Position>& pts) {
  long double sx = 0, sy = 0, cx = 0, cy = 0;
  for (const Position& p : pts) {
    long double y1 = p.x - cx;
    long double t1 = sx + y1;
    cx = (t1 - sx) - y1;
    sx = t1;
    long double y2 = p.y - cy;
    long double t2 = sy + y2;
    cy = (t2 - sy) - y2;
    sy = t2;
  }
  const auto n = static_cast<long double>(pts.size());
  return {static_cast<double>(sx / n), static_cast<double>(sy / n)};
}

std::vector<Position> random_points(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1000, 1000);
  std::vector<Position> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

}  // namespace

TEST(Centroid, Examples) {
  const std::vector<Position> four{{10, 10}, {20, 10}, {10, 20}, {20, 20}};
  EXPECT_EQ(centroid(four), (Position{15, 15}));
  const std::vector<Position> two{{30, 20}, {40, 20}};
  EXPECT_EQ(centroid(two), (Position{35, 20}));
  const std::vector<Position> one{{7, 9}};
  EXPECT_EQ(centroid(one), (Position{7, 9}));
  EXPECT_THROW(centroid(std::vector<Position>{}), std::invalid_argument);
}

TEST(CentroidProperty, AgreesWithOracleAndIsWellBehaved) {
  std::mt19937 rng(42);
  std::uniform_int_distribution<std::size_t> size(1, 30);
  std::uniform_real_distribution<double> shift(-500, 500);
  for (int trial = 0; trial < 2000; ++trial) {
    auto pts = random_points(rng, size(rng));
    const Position c = centroid(pts);
    const Position oracle = mean_oracle(pts);
    ASSERT_NEAR(c.x, oracle.x, 1e-9);
    ASSERT_NEAR(c.y, oracle.y, 1e-9);

    // Bounding-box containment.
    const auto [minx, maxx] = std::minmax_element(pts.begin(), pts.end(), [](auto a, auto b) { return a.x < b.x; });
    const auto [miny, maxy] = std::minmax_element(pts.begin(), pts.end(), [](auto a, auto b) { return a.y < b.y; });
    ASSERT_GE(c.x, minx->x);
    ASSERT_LE(c.x, maxx->x);
    ASSERT_GE(c.y, miny->y);
    ASSERT_LE(c.y, maxy->y);

    // Permutation invariance, exact.
    auto shuffled = pts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    ASSERT_EQ(centroid(shuffled), c);

    // Translation equivariance.
    const Position d{shift(rng), shift(rng)};
    auto moved = pts;
    for (auto& p : moved) p = {p.x + d.x, p.y + d.y};
    const Position cm = centroid(moved);
    ASSERT_NEAR(cm.x, c.x + d.x, 1e-9);
    ASSERT_NEAR(cm.y, c.y + d.y, 1e-9);
  }
}

TEST(Estimate, LabelsRoundTrip) {
  for (auto k : {EstimateKind::kCentroid, EstimateKind::kHello, EstimateKind::kDiscovered}) {
    EXPECT_EQ(parse_estimate_kind(label(k)), k);
  }
  EXPECT_EQ(label(EstimateKind::kCentroid), "CLOC");
  EXPECT_FALSE(parse_estimate_kind("XLOC"));
}

TEST(Estimate, RecordRoundsError) {
  const auto r = make_record(10, {0, 0}, LocationEstimate{EstimateKind::kHello, {1, 1}, 10});
  EXPECT_DOUBLE_EQ(r.error_m, 1.4142);
  EXPECT_FALSE(r.failed());
  const auto f = make_record(10, {0, 0}, std::nullopt);
  EXPECT_TRUE(f.failed());
  EXPECT_EQ(f.error_m, 0.0);
}

TEST(Stamp, OnlyFirstKnStamps) {
  WirePacket rreq = make_rreq(26, 25, 1);
  stamp_rreq(rreq, false, {1, 1});
  EXPECT_FALSE(rreq.flags.location);
  stamp_rreq(rreq, true, {10, 20});
  EXPECT_TRUE(rreq.flags.location);
  EXPECT_EQ(rreq.location(), (Position{10, 20}));
  stamp_rreq(rreq, true, {30, 20});
  EXPECT_EQ(rreq.location(), (Position{10, 20}));

  WirePacket rrep = make_rrep(26, 25);
  stamp_rreq(rrep, true, {1, 1});
  EXPECT_FALSE(rrep.flags.location);
}

TEST(Finalize, EveryBranch) {
  const std::optional<Position> disc = Position{10, 20};
  const std::vector<HelloReply> none;
  const std::vector<HelloReply> one{{7, {10, 30}}};
  const std::vector<HelloReply> two{{7, {10, 30}}, {9, {30, 30}}};

  const auto c = finalize_estimate(two, disc, 5);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->kind, EstimateKind::kCentroid);
  EXPECT_EQ(c->position, (Position{20, 30}));
  EXPECT_EQ(c->at, 5u);

  const auto h = finalize_estimate(one, disc, 5);
  ASSERT_TRUE(h);
  EXPECT_EQ(h->kind, EstimateKind::kHello);
  EXPECT_EQ(h->position, (Position{10, 30}));

  const auto d = finalize_estimate(none, disc, 5);
  ASSERT_TRUE(d);
  EXPECT_EQ(d->kind, EstimateKind::kDiscovered);
  EXPECT_EQ(d->position, (Position{10, 20}));

  EXPECT_FALSE(finalize_estimate(none, std::nullopt, 5));
  EXPECT_EQ(finalize_estimate(one, std::nullopt, 5)->kind, EstimateKind::kHello);
  EXPECT_EQ(finalize_estimate(two, std::nullopt, 5)->kind, EstimateKind::kCentroid);
}

TEST(FinalizeProperty, KindDependsOnlyOnCounts) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> count(0, 8);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < 1000; ++i) {
    std::vector<HelloReply> window;
    const int n = count(rng);
    for (int k = 0; k < n; ++k) window.push_back({static_cast<NodeId>(k + 1), {double(k), double(2 * k)}});
    std::optional<Position> disc;
    if (coin(rng)) disc = Position{1, 2};
    const auto e = finalize_estimate(window, disc, 0);
    if (n >= 2) {
      ASSERT_EQ(e->kind, EstimateKind::kCentroid);
    } else if (n == 1) {
      ASSERT_EQ(e->kind, EstimateKind::kHello);
    } else if (disc) {
      ASSERT_EQ(e->kind, EstimateKind::kDiscovered);
    } else {
      ASSERT_FALSE(e);
    }
  }
}

TEST(LocState, WindowAndDiscovered) {
  LocState s;
  EXPECT_FALSE(s.discovered());
  EXPECT_FALSE(s.record_reply(1, {0, 0}));  // no round open

  WirePacket rrep = make_rrep(26, 25);
  rrep.set_location({10, 20});
  s.on_rrep_received(rrep);
  EXPECT_EQ(s.discovered(), (Position{10, 20}));
  s.on_rrep_received(make_rrep(26, 25));
  EXPECT_FALSE(s.discovered());

  s.open_round(100);
  EXPECT_TRUE(s.round_active());
  EXPECT_EQ(s.window_deadline(), 100u);
  EXPECT_TRUE(s.record_reply(7, {10, 30}));
  EXPECT_FALSE(s.record_reply(7, {10, 30}));
  EXPECT_TRUE(s.record_reply(9, {30, 30}));
  const auto w = s.close_round();
  EXPECT_EQ(w.size(), 2u);
  EXPECT_FALSE(s.round_active());
  EXPECT_FALSE(s.record_reply(11, {0, 0}));
  s.open_round(300);
  EXPECT_TRUE(s.window().empty());
}

namespace {

ScenarioConfig tiny(Algorithm algo, std::vector<NodeSpec> extra) {
  ScenarioConfig c;
  c.name = "tiny";
  c.algo = algo;
  c.nodes = std::move(extra);
  c.mobility.waypoints = {{5, 5}};
  c.mobility.cyclic = false;
  c.duration_ms = 10000;
  return c;
}

}  // namespace

TEST(LorecosNode, CentroidFromTwoKnNeighbours) {
  // Source 3 at (15,15) hears KNs 1 and 2; destination 4 is one hop away.
  auto c = tiny(Algorithm::kLorecos, {{1, Position{10, 10}, true, NodeRole::kGrid},
                                      {2, Position{20, 20}, true, NodeRole::kGrid},
                                      {3, Position{15, 15}, false, NodeRole::kSource},
                                      {4, Position{20, 10}, false, NodeRole::kDestination}});
  Simulation sim(c);
  sim.run_until(1000);
  ASSERT_EQ(sim.records().size(), 1u);
  const auto& r = sim.records()[0];
  ASSERT_FALSE(r.failed());
  EXPECT_EQ(r.estimate->kind, EstimateKind::kCentroid);
  EXPECT_EQ(r.estimate->position, (Position{15, 15}));
  // RREQ, RREP, HELLO request, two replies, one-hop event.
  EXPECT_EQ(sim.engine().counters()[TrafficClass::kHelloRequest], 1u);
  EXPECT_EQ(sim.engine().counters()[TrafficClass::kHelloReply], 2u);
  EXPECT_EQ(sim.engine().counters()[TrafficClass::kEvent], 1u);
  // The first cycle finalizes T after the RREP arrives (t = 2) and the event follows.
  EXPECT_EQ(r.t, 2u + 100u);
}

TEST(LorecosNode, DiscoveredWhenNoKnNeighbour) {
  // Chain source 1 - UN 2 - KN 3 - dest 4: no KN next to the source.
  auto c = tiny(Algorithm::kLorecos, {{1, Position{0, 0}, false, NodeRole::kSource},
                                      {2, Position{10, 0}, false, NodeRole::kGrid},
                                      {3, Position{20, 0}, true, NodeRole::kGrid},
                                      {4, Position{30, 0}, false, NodeRole::kDestination}});
  c.field = {40, 40};
  Simulation sim(c);
  sim.run_until(1000);
  ASSERT_EQ(sim.records().size(), 1u);
  ASSERT_FALSE(sim.records()[0].failed());
  EXPECT_EQ(sim.records()[0].estimate->kind, EstimateKind::kDiscovered);
  EXPECT_EQ(sim.records()[0].estimate->position, (Position{20, 0}));
  auto& src = dynamic_cast<LorecosNode&>(sim.node(1));
  EXPECT_EQ(src.loc_state().discovered(), (Position{20, 0}));
}

TEST(LorecosNode, FailureWithoutAnyKn) {
  auto c = tiny(Algorithm::kLorecos, {{1, Position{0, 0}, false, NodeRole::kSource},
                                      {2, Position{10, 0}, false, NodeRole::kDestination}});
  Simulation sim(c);
  sim.run_until(1000);
  ASSERT_EQ(sim.records().size(), 1u);
  EXPECT_TRUE(sim.records()[0].failed());
  EXPECT_EQ(sim.engine().counters()[TrafficClass::kHelloReply], 0u);
}

TEST(LorecosNode, OnlyRepliesAddressedToUsCount) {
  std::map<NodeId, Position> where{{1, {0, 0}}, {2, {5, 0}}};
  Engine engine(RadioModel{}, {1, 2}, [&where](NodeId id, SimTime) { return where.at(id); });
  std::vector<EstimateRecord> records;
  auto sink = [&records](const EstimateRecord& r) { records.push_back(r); };
  LorecosNode src({1, false, true, false}, engine, {}, sink, 100);
  LorecosNode other({2, false, false, false}, engine, {}, sink, 100);
  engine.set_receiver([&](NodeId r, NodeId s, const WirePacket& p, bool b) {
    (r == 1 ? src : other).receive(s, p, b);
  });

  src.begin_localization();
  engine.schedule_at(10, [&] { engine.broadcast(2, make_hello_reply(2, 99, {5, 0})); });
  engine.run_until(150);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_TRUE(records[0].failed());

  src.begin_localization();
  engine.schedule_at(160, [&] { engine.broadcast(2, make_hello_reply(2, 1, {5, 0})); });
  engine.run_until(300);
  ASSERT_EQ(records.size(), 2u);
  ASSERT_FALSE(records[1].failed());
  EXPECT_EQ(records[1].estimate->kind, EstimateKind::kHello);
  EXPECT_EQ(records[1].estimate->position, (Position{5, 0}));
  EXPECT_EQ(records[1].t, 250u);
}

TEST(Control, EstimateClearsBuffer) {
  BeaconBuffer b;
  EXPECT_FALSE(control_estimate(b, 0));
  b.add(1, {10, 10});
  b.add(2, {20, 20});
  b.add(1, {10, 10});
  EXPECT_EQ(b.size(), 2u);
  const auto e = control_estimate(b, 7);
  ASSERT_TRUE(e);
  EXPECT_EQ(e->kind, EstimateKind::kCentroid);
  EXPECT_EQ(e->position, (Position{15, 15}));
  EXPECT_EQ(e->at, 7u);
  EXPECT_TRUE(b.empty());
}

TEST(ControlNode, BeaconsPerKnPerSecond) {
  auto c = tiny(Algorithm::kControl, {{1, Position{10, 10}, true, NodeRole::kGrid},
                                      {2, Position{20, 20}, true, NodeRole::kGrid},
                                      {3, Position{15, 15}, false, NodeRole::kSource},
                                      {4, Position{20, 10}, false, NodeRole::kDestination}});
  Simulation sim(c);
  sim.run();
  // Two KNs, 10 s: beacons at t = id + 1000 k for k = 0..9.
  EXPECT_EQ(sim.engine().counters()[TrafficClass::kHelloReply], 20u);
  EXPECT_EQ(sim.engine().counters()[TrafficClass::kHelloRequest], 0u);
  ASSERT_EQ(sim.records().size(), 5u);
  EXPECT_TRUE(sim.records()[0].failed());
  for (std::size_t i = 1; i < 5; ++i) EXPECT_EQ(sim.records()[i].estimate->position, (Position{15, 15}));
}
