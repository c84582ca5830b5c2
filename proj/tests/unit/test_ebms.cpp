#include <doctest.h>

#include <cmath>
#include <vector>

#include "evtrack/ebms.hpp"

using namespace evtrack;

namespace {

Event ev(std::uint64_t t, int x, int y) {
  return Event{t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), true};
}

}  // namespace

TEST_CASE("the first event seeds a cluster at its own position") {
  EbmsTracker trk{EbmsConfig{}, SensorGeometry{}};
  trk.process_event(ev(100, 50, 20));
  REQUIRE(trk.clusters().size() == 1);
  CHECK(trk.clusters()[0].cx == 50.0);
  CHECK(trk.clusters()[0].cy == 20.0);
  CHECK(trk.clusters()[0].id == 1);
}

TEST_CASE("an in-radius event pulls the centroid by eta times the offset") {
  EbmsConfig cfg;
  cfg.radius = 8.0;
  cfg.eta = 0.1;
  EbmsTracker trk{cfg, SensorGeometry{}};
  trk.process_event(ev(100, 50, 20));
  trk.process_event(ev(200, 54, 22));  // distance sqrt(20) < 8
  REQUIRE(trk.clusters().size() == 1);
  CHECK(trk.clusters()[0].cx == doctest::Approx(50.4).epsilon(1e-12));
  CHECK(trk.clusters()[0].cy == doctest::Approx(20.2).epsilon(1e-12));
}

TEST_CASE("a far event seeds a second cluster instead of stretching the first") {
  EbmsConfig cfg;
  cfg.radius = 8.0;
  EbmsTracker trk{cfg, SensorGeometry{}};
  trk.process_event(ev(100, 50, 20));
  trk.process_event(ev(200, 100, 100));
  REQUIRE(trk.clusters().size() == 2);
  CHECK(trk.clusters()[0].cx == 50.0);
  CHECK(trk.clusters()[1].cx == 100.0);
}

TEST_CASE("repeated events at one pixel contract the centroid onto it") {
  EbmsConfig cfg;
  cfg.radius = 10.0;
  EbmsTracker trk{cfg, SensorGeometry{}};
  trk.process_event(ev(0, 40, 40));
  trk.process_event(ev(1, 46, 40));
  double prev = std::abs(trk.clusters()[0].cx - 46.0);
  for (int i = 2; i < 40; ++i) {
    trk.process_event(ev(i, 46, 40));
    double d = std::abs(trk.clusters()[0].cx - 46.0);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.1);
}

TEST_CASE("ties go to the earlier cluster") {
  EbmsConfig cfg;
  cfg.radius = 10.0;
  cfg.eta = 0.5;
  EbmsTracker trk{cfg, SensorGeometry{}};
  trk.process_event(ev(0, 40, 40));
  trk.process_event(ev(1, 60, 40));
  trk.process_event(ev(2, 50, 40));  // equidistant to both
  CHECK(trk.clusters()[0].cx == 45.0);
  CHECK(trk.clusters()[1].cx == 60.0);
}

TEST_CASE("idle clusters are pruned after the timeout") {
  EbmsConfig cfg;
  cfg.timeout_us = 1000;
  cfg.radius = 5.0;
  EbmsTracker trk{cfg, SensorGeometry{}};
  trk.process_event(ev(0, 40, 40));
  trk.process_event(ev(500, 100, 100));
  CHECK(trk.clusters().size() == 2);
  // 1002 - 0 > 1000: the first cluster dies before this event is placed
  trk.process_event(ev(1002, 100, 100));
  REQUIRE(trk.clusters().size() == 1);
  CHECK(trk.clusters()[0].cx == 100.0);
  // exactly at the timeout the cluster survives
  EbmsTracker trk2{cfg, SensorGeometry{}};
  trk2.process_event(ev(0, 40, 40));
  trk2.process_event(ev(1000, 100, 100));
  CHECK(trk2.clusters().size() == 2);
}

TEST_CASE("events are dropped when the pool is full and nothing is close") {
  EbmsConfig cfg;
  cfg.max_clusters = 2;
  cfg.radius = 3.0;
  EbmsTracker trk{cfg, SensorGeometry{}};
  trk.process_event(ev(0, 10, 10));
  trk.process_event(ev(1, 100, 100));
  trk.process_event(ev(2, 200, 50));  // no free slot, no cluster in range
  REQUIRE(trk.clusters().size() == 2);
  CHECK(trk.clusters()[0].cx == 10.0);
  CHECK(trk.clusters()[1].cx == 100.0);
}

TEST_CASE("timestamps must be non-decreasing") {
  EbmsTracker trk{EbmsConfig{}, SensorGeometry{}};
  trk.process_event(ev(100, 10, 10));
  CHECK_THROWS_AS(trk.process_event(ev(99, 10, 10)), OrderingError);
  CHECK_NOTHROW(trk.process_event(ev(100, 11, 10)));  // equal is fine
}

TEST_CASE("visibility needs enough recent support") {
  EbmsConfig cfg;
  cfg.radius = 8.0;
  cfg.support_threshold = 5;
  cfg.horizon_us = 1000;
  cfg.timeout_us = 100000;
  EbmsTracker trk{cfg, SensorGeometry{}};
  for (int i = 0; i < 4; ++i) trk.process_event(ev(100 * i, 50, 50));
  CHECK(trk.visible_tracks(400).empty());  // only 4 events
  trk.process_event(ev(400, 50, 50));
  CHECK(trk.visible_tracks(400).size() == 1);
  // the same five timestamps fall out of a horizon anchored much later
  CHECK(trk.visible_tracks(2000).empty());
}

TEST_CASE("the visible box is a clamped square around the rounded centroid") {
  EbmsConfig cfg;
  cfg.radius = 8.0;
  cfg.eta = 0.1;
  cfg.support_threshold = 2;
  EbmsTracker trk{cfg, SensorGeometry{}};
  trk.process_event(ev(100, 50, 20));
  trk.process_event(ev(200, 54, 22));  // centroid (50.4, 20.2) rounds to (50, 20)
  auto vis = trk.visible_tracks(200);
  REQUIRE(vis.size() == 1);
  CHECK(vis[0].first == 1);
  CHECK(vis[0].second == Region{42, 12, 16, 16});
}

TEST_CASE("boxes near the border are clamped inside the sensor") {
  EbmsConfig cfg;
  cfg.radius = 10.0;
  cfg.support_threshold = 1;
  EbmsTracker trk{cfg, SensorGeometry{}};
  trk.process_event(ev(100, 2, 3));
  auto vis = trk.visible_tracks(100);
  REQUIRE(vis.size() == 1);
  const Region r = vis[0].second;
  CHECK(r.x == 0);
  CHECK(r.y == 0);
  CHECK(r.w == 20);
  CHECK(r.h == 20);
  CHECK(r.right() <= 240);
  CHECK(r.bottom() <= 180);
}

TEST_CASE("support counting uses a true sliding window") {
  EbmsConfig cfg;
  cfg.radius = 5.0;
  cfg.support_threshold = 3;
  cfg.horizon_us = 500;
  cfg.timeout_us = 10000;
  EbmsTracker trk{cfg, SensorGeometry{}};
  trk.process_event(ev(0, 50, 50));
  trk.process_event(ev(400, 50, 50));
  trk.process_event(ev(800, 50, 50));
  // at t=800 the window [300, 800] holds two events only
  CHECK(trk.visible_tracks(800).empty());
  trk.process_event(ev(900, 50, 50));
  // window [400, 900] holds t=400, 800, 900
  CHECK(trk.visible_tracks(900).size() == 1);
}

TEST_CASE("state footprint is fixed and op count grows per event") {
  EbmsConfig cfg;
  EbmsTracker trk{cfg, SensorGeometry{}};
  const std::size_t bytes = trk.state_bytes();
  CHECK(bytes >= static_cast<std::size_t>(cfg.max_clusters) * sizeof(EbmsCluster));
  auto ops0 = trk.ops();
  trk.process_event(ev(0, 10, 10));
  CHECK(trk.ops() > ops0);
  for (int i = 1; i <= 100; ++i) trk.process_event(ev(i, 10, 10));
  CHECK(trk.state_bytes() == bytes);  // pool does not grow with events
  CHECK(trk.events_processed() == 101);
}
