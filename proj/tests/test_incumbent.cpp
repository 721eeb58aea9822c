#include <cmath>

#include "doctest.h"
#include "wransim/incumbent.hpp"

using namespace wransim;

namespace {

constexpr double kFrame = 0.010;

double on_fraction(OnOffProcess& p, double horizon) {
  p.extend_to(horizon);
  double on = 0.0;
  for (const auto& seg : p.segments()) {
    const double hi = std::min(seg.end, horizon);
    if (seg.on && hi > seg.begin) on += hi - seg.begin;
  }
  return on / horizon;
}

}  // namespace

TEST_CASE("sojourns are whole positive frame multiples") {
  OnOffProcess p({0.03, 0.05, 0.3}, kFrame, 99);
  p.extend_to(200.0);
  for (const auto& seg : p.segments()) {
    const double len = seg.end - seg.begin;
    CHECK(len >= kFrame - 1e-12);
    const double frames = len / kFrame;
    CHECK(std::abs(frames - std::round(frames)) < 1e-9);
  }
}

TEST_CASE("long-run busy fraction matches the sojourn means") {
  OnOffProcess skew({5.0, 50.0, 0.0}, kFrame, 4);
  CHECK(on_fraction(skew, 150000.0) == doctest::Approx(5.0 / 55.0).epsilon(0.15));

  OnOffProcess even({5.0, 5.0, 0.0}, kFrame, 5);
  CHECK(on_fraction(even, 150000.0) == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("heavy-tailed mixture keeps the frame floor and determinism") {
  OnOffProcess a({0.5, 2.0, 1.0}, kFrame, 31);
  OnOffProcess b({0.5, 2.0, 1.0}, kFrame, 31);
  a.extend_to(500.0);
  b.extend_to(500.0);
  REQUIRE(a.segments().size() == b.segments().size());
  for (size_t i = 0; i < a.segments().size(); ++i) {
    CHECK(a.segments()[i].begin == b.segments()[i].begin);
    CHECK(a.segments()[i].on == b.segments()[i].on);
    CHECK(a.segments()[i].end - a.segments()[i].begin >= kFrame - 1e-12);
  }
}

TEST_CASE("initial state is drawn from the stationary split") {
  int on = 0;
  const int trials = 1000;
  for (int s = 0; s < trials; ++s) {
    OnOffProcess p({5.0, 50.0, 0.0}, kFrame, 1000 + s);
    if (p.state_at(0.0)) ++on;
  }
  CHECK(static_cast<double>(on) / trials == doctest::Approx(5.0 / 55.0).epsilon(0.45));
}

TEST_CASE("interval and point queries agree on frame-aligned slots") {
  OnOffProcess p({0.2, 0.7, 0.4}, kFrame, 8);
  for (int m = 0; m < 3000; ++m) {
    const double t = m * kFrame;
    CHECK(p.any_on(t, t + kFrame) == p.state_at(t + kFrame / 2));
  }
}

TEST_CASE("occupancy respects station coverage and channel") {
  ScenarioConfig cfg;
  cfg.num_cells = 2;
  cfg.num_channels = 6;
  cfg.cell_radius = 1000.0;
  cfg.cpes_per_cell = 1;
  cfg.seed = 3;
  // Cells sit at x = 0 and x = 2000; the station's 600 m footprint only
  // reaches the first disk.
  cfg.stations.push_back({{0.0, 0.0}, 3, 600.0, 1.0});
  cfg.activity.base = {2.0, 2.0, 0.0};
  const Topology topo = build_topology(cfg);
  REQUIRE(distance(topo.cells[0].center, topo.cells[1].center) > 1600.0);
  IncumbentField field(topo, cfg);

  bool saw_on = false, saw_off = false;
  for (int m = 0; m < 4000; ++m) {
    const double t = m * cfg.clock.frame_seconds;
    const bool busy = field.ground_truth(0, 3, t, t + cfg.clock.frame_seconds);
    (busy ? saw_on : saw_off) = true;
    CHECK_FALSE(field.ground_truth(1, 3, t, t + cfg.clock.frame_seconds));
    CHECK_FALSE(field.ground_truth(0, 4, t, t + cfg.clock.frame_seconds));
  }
  CHECK(saw_on);
  CHECK(saw_off);
}

TEST_CASE("audibility needs footprint, channel and activity") {
  ScenarioConfig cfg;
  cfg.num_cells = 1;
  cfg.num_channels = 4;
  cfg.cpes_per_cell = 1;
  cfg.seed = 3;
  cfg.stations.push_back({{0.0, 0.0}, 2, 500.0, 1.0});
  cfg.activity.base = {1.0, 1.0, 0.0};
  const Topology topo = build_topology(cfg);
  IncumbentField field(topo, cfg);

  const Vec2 inside{300.0, 0.0};
  const Vec2 outside{700.0, 0.0};
  bool heard = false;
  for (int m = 0; m < 2000; ++m) {
    const double t = m * 0.01;
    const auto in = field.audible(inside, 2, t, t + 0.01);
    CHECK(field.audible(outside, 2, t, t + 0.01).empty());
    CHECK(field.audible(inside, 1, t, t + 0.01).empty());
    if (!in.empty()) {
      heard = true;
      CHECK(in.size() == 1);
      CHECK(in[0] == 0);
      CHECK(field.station_on(0, t, t + 0.01));
    }
  }
  CHECK(heard);
}
