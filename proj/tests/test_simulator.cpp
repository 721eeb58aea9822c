#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "wransim/incumbent.hpp"
#include "wransim/simulator.hpp"
#include "wransim/topology.hpp"

using namespace wransim;

namespace {

ScenarioConfig small_scenario() {
  ScenarioConfig cfg;
  cfg.num_cells = 3;
  cfg.num_channels = 6;
  cfg.cpes_per_cell = 6;
  cfg.auto_stations = 5;
  cfg.seed = 9;
  cfg.horizon_superframes = 60;
  cfg.radio.tx_snr_db = 60.0;
  cfg.radio.path_loss_ref_distance = 30.0;
  cfg.activity.base = {3.0, 9.0, 0.3};
  cfg.classifier.warmup_qps = 40;
  cfg.classifier.train_window = 80;
  cfg.classifier.test_window = 40;
  cfg.classifier.refit_period = 60;
  cfg.metrics.window = 100;
  return cfg;
}

}  // namespace

TEST_CASE("quiet periods follow the frame cadence until escalation") {
  ClockConfig clock;
  clock.frames_per_superframe = 16;
  clock.qp_every_frames = 2;
  QpScheduler sched(clock);

  for (int f = 0; f < 16; ++f) CHECK(sched.is_qp_frame(f) == (f % 2 == 0));
  CHECK(sched.plan(3, 0).due);
  CHECK(sched.plan(3, 0).sample_multiplier == 1);
  CHECK(sched.plan(3, 4).due);
  CHECK_FALSE(sched.plan(3, 5).due);

  // A requested escalation takes effect at the next superframe boundary:
  // one long quiet period at frame 0, nothing at the other QP frames.
  sched.request_escalation(3);
  CHECK_FALSE(sched.escalated(3));
  sched.begin_superframe();
  CHECK(sched.escalated(3));
  CHECK(sched.plan(3, 0).due);
  CHECK(sched.plan(3, 0).sample_multiplier == 16);
  CHECK_FALSE(sched.plan(3, 2).due);
  CHECK_FALSE(sched.plan(3, 4).due);
  // Other channels keep the normal cadence.
  CHECK(sched.plan(4, 2).due);
  CHECK(sched.plan(4, 2).sample_multiplier == 1);

  // The long quiet period is one-shot; the next boundary clears it.
  sched.begin_superframe();
  CHECK_FALSE(sched.escalated(3));
  CHECK(sched.plan(3, 2).due);
  CHECK(sched.plan(3, 2).sample_multiplier == 1);
}

TEST_CASE("database reads lag ground truth and flip with the error knob") {
  ScenarioConfig cfg;
  cfg.num_cells = 1;
  cfg.num_channels = 2;
  cfg.seed = 31;
  cfg.stations.push_back({{0.0, 0.0}, 1, 1500.0, 1.0});
  cfg.activity.base = {2.0, 3.0, 0.0};
  Topology topo = build_topology(cfg);
  IncumbentField field(topo, cfg);

  SUBCASE("zero error and staleness reproduce the field state") {
    DatabaseOracle db(&field, {0.0, 0.0}, cfg.seed);
    for (std::int64_t frame = 0; frame < 400; ++frame) {
      const double now = 0.01 * static_cast<double>(frame);
      CHECK(db.read(0, 1, now, frame) == (field.ground_truth_at(0, 1, now) ? 1 : 0));
      CHECK(db.read(0, 2, now, frame) == 0);  // no station on channel 2
    }
  }

  SUBCASE("staleness shifts the query time back, clamped at zero") {
    DatabaseOracle db(&field, {0.0, 0.5}, cfg.seed);
    for (std::int64_t frame = 0; frame < 400; ++frame) {
      const double now = 0.01 * static_cast<double>(frame);
      const double when = std::max(0.0, now - 0.5);
      CHECK(db.read(0, 1, now, frame) == (field.ground_truth_at(0, 1, when) ? 1 : 0));
    }
  }

  SUBCASE("certain error inverts every answer") {
    DatabaseOracle db(&field, {1.0, 0.0}, cfg.seed);
    for (std::int64_t frame = 0; frame < 200; ++frame) {
      const double now = 0.01 * static_cast<double>(frame);
      CHECK(db.read(0, 1, now, frame) == (field.ground_truth_at(0, 1, now) ? 0 : 1));
    }
  }

  SUBCASE("flips are keyed by coordinates, not by query order") {
    DatabaseOracle a(&field, {0.5, 0.0}, cfg.seed);
    DatabaseOracle b(&field, {0.5, 0.0}, cfg.seed);
    std::vector<int> forward, backward;
    for (std::int64_t frame = 0; frame < 120; ++frame)
      forward.push_back(a.read(0, 1, 0.01 * static_cast<double>(frame), frame));
    for (std::int64_t frame = 119; frame >= 0; --frame)
      backward.push_back(b.read(0, 1, 0.01 * static_cast<double>(frame), frame));
    std::reverse(backward.begin(), backward.end());
    CHECK(forward == backward);
    // The error knob actually fires at this probability.
    int flips = 0;
    for (std::int64_t frame = 0; frame < 120; ++frame) {
      const double now = 0.01 * static_cast<double>(frame);
      flips += forward[static_cast<size_t>(frame)] !=
               (field.ground_truth_at(0, 1, now) ? 1 : 0);
    }
    CHECK(flips > 20);
    CHECK(flips < 100);
  }
}

TEST_CASE("run_simulation rejects a scenario that does not validate") {
  ScenarioConfig cfg = small_scenario();
  cfg.num_channels = 0;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
  cfg = small_scenario();
  cfg.fusion.alpha = 1.5;
  CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
}

TEST_CASE("a short closed-loop run produces a coherent bundle") {
  const ScenarioConfig cfg = small_scenario();
  RunOptions opts;
  opts.keep_trace = true;
  opts.keep_truth = true;
  const ResultBundle r = run_simulation(cfg, opts);

  // 60 superframes, 16 frames each, quiet period every second frame.
  CHECK(r.stats.qp_ticks == 480);
  CHECK(r.stats.sensing_events > 0);
  CHECK(r.stats.reports_total > 0);
  CHECK(r.stats.reports_lost >= 0);
  CHECK(r.stats.list_violations == 0);
  CHECK(r.final_lists.size() == 3);
  // A cell can end below target when its backups ran out: the 9.6 s horizon
  // is shorter than the 30 s idle span a promotion needs.
  for (const ChannelLists& l : r.final_lists)
    CHECK(static_cast<int>(l.ocl.size()) <= cfg.mgmt.operating_per_cell);

  REQUIRE(r.rules == cfg.fusion.compare_rules);
  for (FusionRule rule : r.rules) {
    REQUIRE(r.perf.count(rule) == 1);
    const PerfVector s = weighted_summary(r.perf.at(rule));
    CHECK(s.p_sd >= 0.0);
    CHECK(s.p_sd <= 1.0);
    CHECK(s.p_md >= 0.0);
    CHECK(s.p_fa >= 0.0);
    CHECK(std::abs(s.p_sd + s.p_md + s.p_fa - 1.0) < 1e-12);
    CHECK(s.nwcf >= -1.0);
    CHECK(s.nwcf <= 1.0);
    // Default cadence snapshots after superframes 25 and 50.
    REQUIRE(r.series.count(rule) == 1);
    CHECK(r.series.at(rule).size() == 2);
    CHECK(r.series.at(rule)[0].time < r.series.at(rule)[1].time);
  }

  REQUIRE_FALSE(r.transitions.empty());
  for (size_t i = 1; i < r.transitions.size(); ++i)
    CHECK(r.transitions[i - 1].time <= r.transitions[i].time);

  REQUIRE_FALSE(r.sensors.empty());
  bool saw_bs = false;
  for (const SensorSummary& s : r.sensors) {
    CHECK(s.cell >= 0);
    CHECK(s.cell < 3);
    CHECK(s.ch >= 1);
    CHECK(s.ch <= 6);
    CHECK(s.scored >= 0);
    if (s.first_negative != -1) {
      CHECK(s.first_negative >= 1);
      CHECK(s.first_negative <= s.scored);
    }
    saw_bs = saw_bs || s.sensor == 0;
  }
  CHECK(saw_bs);

  REQUIRE_FALSE(r.trace.empty());
  for (const TraceRow& row : r.trace) {
    CHECK(row.t >= 0);
    CHECK(row.t < 480);
    CHECK((row.decision == 0 || row.decision == 1));
    CHECK((row.truth == 0 || row.truth == 1));
    CHECK((row.db == 0 || row.db == 1));
    CHECK(row.ch >= 1);
    CHECK(row.ch <= 6);
  }
  // One truth row per in-band fusion event, one trace row per rule on top.
  REQUIRE_FALSE(r.truth.empty());
  CHECK(r.trace.size() == r.truth.size() * r.rules.size());
  CHECK(r.truth.size() <= static_cast<size_t>(r.stats.qp_ticks) * 3 *
                              static_cast<size_t>(cfg.mgmt.operating_per_cell));
}

TEST_CASE("identical scenarios replay identically") {
  const ScenarioConfig cfg = small_scenario();
  const ResultBundle a = run_simulation(cfg);
  const ResultBundle b = run_simulation(cfg);

  CHECK(a.stats.sensing_checksum == b.stats.sensing_checksum);
  CHECK(a.stats.truth_checksum == b.stats.truth_checksum);
  CHECK(a.stats.sensing_events == b.stats.sensing_events);
  CHECK(a.stats.reports_total == b.stats.reports_total);
  CHECK(a.stats.reports_lost == b.stats.reports_lost);
  CHECK(a.stats.switches == b.stats.switches);
  CHECK(a.stats.refits == b.stats.refits);
  for (FusionRule rule : a.rules) {
    const PerfVector x = weighted_summary(a.perf.at(rule));
    const PerfVector y = weighted_summary(b.perf.at(rule));
    CHECK(x.nwcf == y.nwcf);
    CHECK(x.p_sd == y.p_sd);
    CHECK(x.p_md == y.p_md);
    CHECK(x.p_fa == y.p_fa);
  }
  // Trace-keeping must not perturb the simulation itself.
  RunOptions opts;
  opts.keep_trace = true;
  opts.series_every_superframes = 0;
  const ResultBundle c = run_simulation(cfg, opts);
  CHECK(c.stats.sensing_checksum == a.stats.sensing_checksum);
  CHECK(c.series.empty());
}

TEST_CASE("a different seed changes the sensed powers") {
  ScenarioConfig cfg = small_scenario();
  const ResultBundle a = run_simulation(cfg);
  cfg.seed = 10;
  const ResultBundle b = run_simulation(cfg);
  CHECK(a.stats.sensing_checksum != b.stats.sensing_checksum);
}
