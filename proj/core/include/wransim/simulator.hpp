#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "wransim/chanmgmt.hpp"
#include "wransim/config.hpp"
#include "wransim/incumbent.hpp"
#include "wransim/metrics.hpp"
#include "wransim/types.hpp"

namespace wransim {

// Spectrum occupancy oracle: ground truth lagged by the configured
// staleness with a per-query flip probability. Every read is keyed by
// (cell, channel, frame), so replies do not depend on query order.
class DatabaseOracle {
 public:
  DatabaseOracle(IncumbentField* field, const DatabaseConfig& cfg, std::uint64_t master_seed);
  int read(CellId cell, ChannelId ch, double now, std::int64_t frame);

 private:
  IncumbentField* field_;
  DatabaseConfig cfg_;
  std::uint64_t seed_;
};

// Two-stage quiet-period plan. Intra-frame quiet periods run on a fixed
// frame cadence; when the detection requirement is missed on a channel the
// next superframe hosts a single long quiet period for it, with the sample
// count scaled by the superframe length.
class QpScheduler {
 public:
  explicit QpScheduler(const ClockConfig& clock) : clock_(clock) {}

  void request_escalation(ChannelId ch) { requested_.insert(ch); }
  void begin_superframe();
  bool is_qp_frame(int frame_in_sf) const { return frame_in_sf % clock_.qp_every_frames == 0; }

  struct Plan {
    bool due = false;
    int sample_multiplier = 1;
  };
  Plan plan(ChannelId ch, int frame_in_sf) const;
  bool escalated(ChannelId ch) const { return long_qp_.contains(ch); }

 private:
  ClockConfig clock_;
  std::set<ChannelId> requested_;
  std::set<ChannelId> long_qp_;
};

struct TraceRow {
  QpIndex t = 0;
  CellId cell = 0;
  ChannelId ch = 0;
  FusionRule rule = FusionRule::McLds;
  int decision = 0;
  int truth = 0;
  int db = 0;
  double statistic = 0.0;  // weighted indicator sum, or vote count for the hard rules
};

struct TruthRow {
  QpIndex t = 0;
  CellId cell = 0;
  ChannelId ch = 0;
  int truth = 0;
};

struct SensorSummary {
  CellId cell = 0;
  ChannelId ch = 0;
  SensorId sensor = 0;
  long scored = 0;           // quiet periods this sensor was scored on
  double final_w = 0.0;      // confidence after the last scored quiet period
  long first_negative = -1;  // ordinal of the first scored QP with w < 0, -1 if none
};

struct RunStats {
  std::int64_t qp_ticks = 0;
  std::int64_t sensing_events = 0;
  std::int64_t inter_frame_qps = 0;
  std::int64_t refits = 0;
  std::int64_t switches = 0;
  std::int64_t outages = 0;
  std::int64_t reports_total = 0;
  std::int64_t reports_lost = 0;
  std::int64_t list_violations = 0;
  std::uint64_t sensing_checksum = 0;  // order-independent hash over all sensed powers
  std::uint64_t truth_checksum = 0;
};

struct RuleSeriesPoint {
  double time = 0.0;
  PerfVector summary;
};

struct ResultBundle {
  std::vector<FusionRule> rules;
  std::map<FusionRule, PerfMatrix> perf;
  std::map<FusionRule, std::vector<RuleSeriesPoint>> series;
  std::vector<ListTransition> transitions;
  std::vector<SwitchEvent> switches;
  std::vector<ChannelLists> final_lists;
  std::vector<TraceRow> trace;
  std::vector<TruthRow> truth;
  std::vector<SensorSummary> sensors;
  RunStats stats;
};

struct RunOptions {
  bool keep_trace = false;
  bool keep_truth = false;
  int series_every_superframes = 25;  // 0 disables the time series
};

// Runs the full closed loop: quiet-period sensing, per-sensor learning,
// report delivery, central fusion (with the comparison rules evaluated in
// parallel on the same sensor decisions), channel-list management, and the
// sliding-window evaluation. Throws std::invalid_argument when the
// scenario configuration does not validate.
ResultBundle run_simulation(const ScenarioConfig& cfg, const RunOptions& opts = {});

}  // namespace wransim
