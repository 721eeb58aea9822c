#include "wransim/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>

#include "wransim/classifier.hpp"
#include "wransim/fusion.hpp"
#include "wransim/radio.hpp"
#include "wransim/rng.hpp"
#include "wransim/topology.hpp"

namespace wransim {

DatabaseOracle::DatabaseOracle(IncumbentField* field, const DatabaseConfig& cfg,
                               std::uint64_t master_seed)
    : field_(field), cfg_(cfg), seed_(master_seed) {}

int DatabaseOracle::read(CellId cell, ChannelId ch, double now, std::int64_t frame) {
  const double when = std::max(0.0, now - cfg_.staleness);
  int z = field_->ground_truth_at(cell, ch, when) ? 1 : 0;
  if (cfg_.error_prob > 0.0) {
    SplitMixEngine eng(derive_seed(seed_, stream::database, static_cast<std::uint64_t>(cell),
                                   static_cast<std::uint64_t>(ch),
                                   static_cast<std::uint64_t>(frame)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(eng) < cfg_.error_prob) z = 1 - z;
  }
  return z;
}

void QpScheduler::begin_superframe() {
  long_qp_ = std::move(requested_);
  requested_.clear();
}

QpScheduler::Plan QpScheduler::plan(ChannelId ch, int frame_in_sf) const {
  if (long_qp_.contains(ch)) {
    // The long quiet period consumes the superframe: one sensing at its
    // start, nothing afterwards.
    return {frame_in_sf == 0, clock_.frames_per_superframe};
  }
  return {is_qp_frame(frame_in_sf), 1};
}

namespace {

// Fusion state of one learning variant (fixed parameters or window-tuned).
struct VariantState {
  TemporalParams temporal;
  int prev_central = -1;  // -1 until seeded by the first database reading
  std::map<SensorId, ScoreHistory> scores;
  std::map<SensorId, QpIndex> last_scored;  // sensing-event index of last push
};

// Discounted mass of the score slots a short history has not filled yet,
// sum of alpha^q for q in (have, want].
double unfilled_mass(double alpha, int have, int want) {
  double tail = 0.0;
  double decay = std::pow(alpha, have);
  for (int q = have + 1; q <= want; ++q) {
    decay *= alpha;
    tail += decay;
  }
  return tail;
}

struct SensorStream {
  explicit SensorStream(const ClassifierConfig& cfg, double raw_threshold)
      : classifier(cfg, raw_threshold) {}
  SensorClassifier classifier;
  // Confidence bookkeeping for the fixed-parameter variant.
  long scored = 0;
  double last_w = 0.0;
  long first_negative = -1;
};

struct RollingBits {
  explicit RollingBits(int capacity) : cap(capacity) {}
  void push(int bit) {
    buf.push_back(static_cast<std::int8_t>(bit));
    sum += bit;
    if (static_cast<int>(buf.size()) > cap) {
      sum -= buf.front();
      buf.pop_front();
    }
  }
  double mean(double fallback) const {
    if (buf.empty()) return fallback;
    return static_cast<double>(sum) / static_cast<double>(buf.size());
  }
  std::deque<std::int8_t> buf;
  int cap;
  int sum = 0;
};

struct ChannelCtx {
  explicit ChannelCtx(const ScenarioConfig& cfg)
      : prior(cfg.classifier.prior_window) {}
  std::map<SensorId, std::unique_ptr<SensorStream>> sensors;
  VariantState fixed;
  VariantState tuned;
  std::map<FusionRule, MetricsWindow> windows;
  RollingBits prior;
  QpIndex events = 0;          // sensing events seen on this (cell, channel)
  QpIndex last_flag_switch = std::numeric_limits<QpIndex>::min() / 2;
  double next_obs = 0.0;
};

struct PendingSwitch {
  double complete_at;
  CellId cell;
  ChannelId to;
};

class Engine {
 public:
  Engine(const ScenarioConfig& cfg, const RunOptions& opts)
      : cfg_(cfg),
        opts_(opts),
        topo_(build_topology(cfg)),
        field_(topo_, cfg),
        gains_(topo_, cfg.radio, cfg.seed),
        db_(&field_, cfg.database, cfg.seed),
        scheduler_(cfg.clock) {
    rules_ = cfg_.fusion.compare_rules;
    if (std::find(rules_.begin(), rules_.end(), cfg_.fusion.active_rule) == rules_.end())
      rules_.push_back(cfg_.fusion.active_rule);
    tuned_enabled_ =
        std::find(rules_.begin(), rules_.end(), FusionRule::McLdsAdaptive) != rules_.end();

    managers_.reserve(cfg_.num_cells);
    for (CellId j = 0; j < cfg_.num_cells; ++j) {
      std::set<ChannelId> dcl;
      if (auto it = cfg_.disallowed.find(j); it != cfg_.disallowed.end()) dcl = it->second;
      managers_.emplace_back(j, cfg_.num_channels, std::move(dcl),
                             MgmtTimings{cfg_.mgmt.promotion_idle, cfg_.mgmt.max_sense_gap,
                                         cfg_.mgmt.channel_move_time});
    }
    ctx_.resize(static_cast<size_t>(cfg_.num_cells) * cfg_.num_channels);
    seed_initial_lists();
    refresh_gates();
    reassign();
  }

  ResultBundle run();

 private:
  ChannelCtx& ctx(CellId j, ChannelId k) {
    auto& slot = ctx_[static_cast<size_t>(j) * cfg_.num_channels + (k - 1)];
    if (!slot) {
      slot = std::make_unique<ChannelCtx>(cfg_);
      slot->fixed.temporal = {cfg_.fusion.alpha, cfg_.fusion.historic_count};
      slot->tuned.temporal = slot->fixed.temporal;
      for (FusionRule r : rules_) slot->windows.emplace(r, MetricsWindow(cfg_.metrics.window));
    }
    return *slot;
  }

  int score_capacity() const {
    return std::max(cfg_.fusion.historic_count,
                    static_cast<int>(std::floor(cfg_.fusion.adapt.b)) + 1);
  }

  // A cell cannot operate more channels than it has CPEs to sense them.
  int operating_target() const {
    return cfg_.cpes_per_cell > 0 ? std::min(cfg_.mgmt.operating_per_cell, cfg_.cpes_per_cell)
                                  : cfg_.mgmt.operating_per_cell;
  }

  void seed_initial_lists();
  void refresh_gates();
  void reassign();
  void management_cycle(double now);
  void process_switch_completions(double now);
  void process_sensing(CellId j, ChannelId k, bool in_band, QpIndex t, std::int64_t frame,
                       double t0, double t1, int multiplier);
  double variant_decision(VariantState& var, ChannelCtx& cc, ChannelId k,
                          const std::vector<SensorId>& order,
                          const std::vector<int>& decisions,
                          const std::vector<bool>& delivered,
                          const std::vector<double>& betas, int r, int* out_decision);
  void note_switch(const std::optional<SwitchEvent>& ev);
  void snapshot_series(double now);
  PerfMatrix build_matrix(FusionRule rule);

  ScenarioConfig cfg_;
  RunOptions opts_;
  Topology topo_;
  IncumbentField field_;
  GainModel gains_;
  DatabaseOracle db_;
  QpScheduler scheduler_;
  std::vector<CellChannelManager> managers_;
  std::vector<std::unique_ptr<ChannelCtx>> ctx_;
  std::vector<ChannelLists> snapshots_;
  std::vector<PendingSwitch> pending_;
  SensorAssignment assignment_;
  std::vector<FusionRule> rules_;
  bool tuned_enabled_ = false;
  QpIndex qp_tick_ = 0;
  ResultBundle out_;
};

void Engine::seed_initial_lists() {
  // Greedy assignment in cell order: operating channels avoid the
  // disallowed set and earlier neighbors' choices, then backups likewise;
  // everything else starts under protection and must earn backup status
  // through observation.
  for (CellId j = 0; j < cfg_.num_cells; ++j) {
    auto& mgr = managers_[j];
    auto taken_nearby = [&](ChannelId k) {
      for (CellId l : topo_.neighbors[j]) {
        if (l > j) continue;
        if (managers_[l].lists().ocl.contains(k) || managers_[l].lists().bcl.contains(k))
          return true;
      }
      return false;
    };
    int want_op = operating_target();
    for (ChannelId k = 1; k <= cfg_.num_channels && want_op > 0; ++k) {
      if (mgr.lists().dcl.contains(k) || taken_nearby(k)) continue;
      mgr.seed_operating(k);
      --want_op;
    }
    int want_bk = cfg_.mgmt.initial_backup_per_cell;
    for (ChannelId k = 1; k <= cfg_.num_channels && want_bk > 0; ++k) {
      if (mgr.lists().kind_of(k) != ListKind::Untracked || taken_nearby(k)) continue;
      mgr.seed_backup(k);
      --want_bk;
    }
    for (ChannelId k = 1; k <= cfg_.num_channels; ++k)
      if (mgr.lists().kind_of(k) == ListKind::Untracked) mgr.seed_protected(k);
  }
}

void Engine::refresh_gates() {
  snapshots_.clear();
  snapshots_.reserve(managers_.size());
  for (const auto& m : managers_) snapshots_.push_back(m.lists());
  for (CellId j = 0; j < cfg_.num_cells; ++j) {
    std::set<ChannelId> blocked;
    for (CellId l : topo_.neighbors[j])
      blocked.insert(snapshots_[l].ocl.begin(), snapshots_[l].ocl.end());
    for (const PendingSwitch& p : pending_)
      if (p.cell != j && topo_.are_neighbors(j, p.cell)) blocked.insert(p.to);
    managers_[j].set_promotion_gate(
        [blocked](ChannelId ch) { return !blocked.contains(ch); });
  }
}

void Engine::reassign() {
  std::vector<std::set<ChannelId>> operating(cfg_.num_cells), tracked(cfg_.num_cells);
  for (CellId j = 0; j < cfg_.num_cells; ++j) {
    const ChannelLists& l = managers_[j].lists();
    operating[j] = l.ocl;
    tracked[j] = l.ocl;
    tracked[j].insert(l.bcl.begin(), l.bcl.end());
    tracked[j].insert(l.pcl.begin(), l.pcl.end());
    tracked[j].insert(l.ccl.begin(), l.ccl.end());
  }
  assignment_ = assign_sensors(topo_, operating, tracked, cfg_, &assignment_);
}

void Engine::note_switch(const std::optional<SwitchEvent>& ev) {
  if (!ev) {
    ++out_.stats.outages;
    return;
  }
  ++out_.stats.switches;
  out_.switches.push_back(*ev);
  pending_.push_back({ev->deadline, ev->cell, ev->to});
}

void Engine::process_switch_completions(double now) {
  bool changed = false;
  for (auto it = pending_.begin(); it != pending_.end();) {
    if (it->complete_at <= now + 1e-9) {
      managers_[it->cell].complete_switch(it->to, now);
      managers_[it->cell].note_switch_completion();
      it = pending_.erase(it);
      changed = true;
    } else {
      ++it;
    }
  }
  if (changed) {
    refresh_gates();
    reassign();
  }
}

void Engine::management_cycle(double now) {
  refresh_gates();

  // Coexistence upkeep from the snapshots: backups a neighbor now operates
  // lose their switch-ready status until observation clears them again.
  for (CellId j = 0; j < cfg_.num_cells; ++j) {
    std::vector<ChannelId> demote;
    for (ChannelId ch : managers_[j].lists().bcl)
      for (CellId l : topo_.neighbors[j])
        if (snapshots_[l].ocl.contains(ch)) {
          demote.push_back(ch);
          break;
        }
    for (ChannelId ch : demote) managers_[j].demote_backup(ch, now);
  }

  // Same-channel operation between neighbors (possible after simultaneous
  // switches): the higher-indexed cell moves away.
  for (CellId j = 0; j < cfg_.num_cells; ++j)
    for (CellId l : topo_.neighbors[j]) {
      if (l <= j) continue;
      std::vector<ChannelId> shared;
      for (ChannelId ch : managers_[j].lists().ocl)
        if (managers_[l].lists().ocl.contains(ch)) shared.push_back(ch);
      for (ChannelId ch : shared) note_switch(managers_[l].vacate_operating(ch, now));
    }

  // Out-of-band sensing rounds for the watched channels.
  for (CellId j = 0; j < cfg_.num_cells; ++j) {
    const ChannelLists& l = managers_[j].lists();
    std::vector<ChannelId> watched;
    watched.insert(watched.end(), l.pcl.begin(), l.pcl.end());
    watched.insert(watched.end(), l.ccl.begin(), l.ccl.end());
    watched.insert(watched.end(), l.bcl.begin(), l.bcl.end());
    std::sort(watched.begin(), watched.end());
    for (ChannelId k : watched) {
      ChannelCtx& cc = ctx(j, k);
      if (now + 1e-9 < cc.next_obs) continue;
      cc.next_obs = now + cfg_.mgmt.obs_period;
      const std::int64_t frame = std::llround(now / cfg_.clock.frame_seconds);
      process_sensing(j, k, false, qp_tick_, frame, now, now + cfg_.clock.frame_seconds, 1);
    }
  }

  // Refill cells operating below target.
  for (CellId j = 0; j < cfg_.num_cells; ++j) {
    auto& mgr = managers_[j];
    while (static_cast<int>(mgr.lists().ocl.size()) + mgr.pending_switches() <
           operating_target()) {
      auto ev = mgr.resume_operating(now);
      if (!ev) break;
      ++out_.stats.switches;
      out_.switches.push_back(*ev);
      pending_.push_back({ev->deadline, ev->cell, ev->to});
    }
  }

  std::vector<ChannelLists> live;
  live.reserve(managers_.size());
  for (const auto& m : managers_) live.push_back(m.lists());
  out_.stats.list_violations +=
      static_cast<std::int64_t>(validate_lists(live, topo_.neighbors).size());

  reassign();
}

double Engine::variant_decision(VariantState& var, ChannelCtx& cc, ChannelId k,
                                const std::vector<SensorId>& order,
                                const std::vector<int>& decisions,
                                const std::vector<bool>& delivered,
                                const std::vector<double>& betas, int r, int* out_decision) {
  const auto [gamma, zeta] = cfg_.score_for(k);
  const ScoreConfig sc{gamma, zeta};
  const int d_prev = var.prev_central >= 0 ? var.prev_central : r;

  double beta_scale = 1.0;
  if (cfg_.fusion.normalize_report_gains) {
    double sum = 0.0;
    int n = 0;
    for (size_t i = 1; i < order.size(); ++i)
      if (delivered[i]) {
        sum += betas[i];
        ++n;
      }
    if (n > 0 && sum > 0.0) beta_scale = static_cast<double>(n) / sum;
  }

  double x_bs = 0.0;
  std::vector<WeightedReport> reports;
  reports.reserve(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    if (!delivered[i]) continue;
    auto it = var.scores.find(order[i]);
    if (it != var.scores.end()) {
      const auto seen = var.last_scored.find(order[i]);
      // A report can fade out for a couple of events without voiding the
      // record, but a longer duty gap means the history describes a stale
      // context and the sensor re-earns its vote from scratch.
      if (seen == var.last_scored.end() || cc.events - seen->second > 3) {
        var.scores.erase(it);
        it = var.scores.end();
      }
    }
    // Half-filled score windows flip sign on a single penalty, so a sensor
    // abstains until its window is fully populated for this channel.
    const double w = it != var.scores.end() &&
                             it->second.size() >= var.temporal.historic_count
                         ? confidence(it->second, var.temporal)
                         : 0.0;
    const double x = indicator(w, decisions[i]);
    if (order[i] == 0)
      x_bs = x;
    else
      reports.push_back({x, betas[i] * beta_scale});
  }
  const int d_central = combine(x_bs, reports);

  double statistic = x_bs;
  for (const auto& rep : reports) statistic += rep.beta_rep * rep.x;

  for (size_t i = 0; i < order.size(); ++i) {
    if (!delivered[i]) continue;
    auto [it, inserted] = var.scores.try_emplace(order[i], score_capacity());
    it->second.push(reward_penalty_score(decisions[i], d_prev, r, sc));
    var.last_scored[order[i]] = cc.events;
    if (&var == &cc.fixed) {
      SensorStream& st = *cc.sensors.at(order[i]);
      st.last_w = confidence(it->second, var.temporal);
      ++st.scored;
      if (st.first_negative < 0 && st.last_w < 0.0) st.first_negative = st.scored;
    }
  }
  var.prev_central = d_central;
  if (out_decision) *out_decision = d_central;
  return statistic;
}

void Engine::process_sensing(CellId j, ChannelId k, bool in_band, QpIndex t,
                             std::int64_t frame, double t0, double t1, int multiplier) {
  ChannelCtx& cc = ctx(j, k);
  ++cc.events;
  if (multiplier > 1) ++out_.stats.inter_frame_qps;

  const int z = field_.ground_truth(j, k, t0, t1) ? 1 : 0;
  const int r = db_.read(j, k, t0, frame);
  cc.prior.push(1 - r);

  std::vector<SensorId> order{0};
  if (const auto* duty = in_band ? &assignment_.inband[j] : &assignment_.oob[j];
      duty->contains(k))
    for (SensorId s : duty->at(k)) order.push_back(s);

  const int m_eff = cfg_.radio.samples_per_sensing * multiplier;
  const double raw_threshold = cfg_.radio.threshold_factor * cfg_.radio.noise_power;
  const double snr_min = cfg_.radio.threshold_factor * m_eff;

  std::vector<int> decisions(order.size(), 0);
  std::vector<bool> delivered(order.size(), true);
  std::vector<double> betas(order.size(), 0.0);

  for (size_t i = 0; i < order.size(); ++i) {
    const SensorId s = order[i];
    const int uid = topo_.sensor_uid(j, s);
    const Vec2 pos = topo_.sensor_position(j, s);

    double prx = 0.0;
    for (int st : field_.audible(pos, k, t0, t1))
      prx += field_.station(st).tx_power * gains_.sensing_gain(j, s, st, frame);

    SplitMixEngine eng(derive_seed(cfg_.seed, stream::sensing, static_cast<std::uint64_t>(uid),
                                   static_cast<std::uint64_t>(k),
                                   static_cast<std::uint64_t>(frame)));
    const ReceivedPower rp = sense_power(prx, m_eff, cfg_.radio, eng);
    ++out_.stats.sensing_events;
    out_.stats.sensing_checksum ^= mix64(std::bit_cast<std::uint64_t>(rp.power_sum) +
                                         static_cast<std::uint64_t>(uid) * 0x9E3779B9u);

    // Learning runs on the per-sample average so escalated long quiet
    // periods stay on the same scale as regular ones.
    const double s_norm = rp.power_sum / m_eff;
    auto [sit, fresh] = cc.sensors.try_emplace(s, nullptr);
    if (fresh) sit->second = std::make_unique<SensorStream>(cfg_.classifier, raw_threshold);
    SensorClassifier& cls = sit->second->classifier;

    decisions[i] = cls.decide(s_norm);
    cls.observe(s_norm, cfg_.classifier.labels == LabelSource::Truth ? z : r);
    if (cls.needs_refit(t)) {
      DetectionRates rates{0.5, 0.5};
      if (cfg_.classifier.rates == RatesSource::Empirical) {
        if (auto emp = cls.empirical_raw_rates()) rates = *emp;
      } else {
        rates = analytic_rates(rp.snr_inst, snr_min, m_eff, 1.0, cfg_.radio.rate_formula);
      }
      const double prior = cfg_.classifier.prior_override > 0.0
                               ? cfg_.classifier.prior_override
                               : std::clamp(cc.prior.mean(0.5), 1e-3, 1.0 - 1e-3);
      if (cls.refit(t, rates, prior) == SensorClassifier::RefitOutcome::Fitted)
        ++out_.stats.refits;
    }

    if (s > 0) {
      betas[i] = gains_.reporting_gain(j, s, frame);
      if (s <= cfg_.faults.byzantine_per_cell) decisions[i] = 1 - z;  // hostile report
      if (std::isfinite(cfg_.radio.report_loss_threshold_db)) {
        const double tau = db_to_linear(cfg_.radio.report_loss_threshold_db);
        delivered[i] =
            betas[i] * cfg_.radio.report_tx_power / cfg_.radio.noise_power >= tau;
      }
      ++out_.stats.reports_total;
      if (!delivered[i]) ++out_.stats.reports_lost;
    }
  }

  // Learning variants first, then the hard baselines on the same bits.
  std::map<FusionRule, std::pair<int, double>> verdicts;
  int d_fixed = 0;
  const double stat_fixed =
      variant_decision(cc.fixed, cc, k, order, decisions, delivered, betas, r, &d_fixed);
  verdicts[FusionRule::McLds] = {d_fixed, stat_fixed};
  if (tuned_enabled_) {
    int d_tuned = 0;
    const double stat_tuned =
        variant_decision(cc.tuned, cc, k, order, decisions, delivered, betas, r, &d_tuned);
    verdicts[FusionRule::McLdsAdaptive] = {d_tuned, stat_tuned};
  }
  std::vector<int> bits;
  bits.reserve(order.size());
  for (size_t i = 0; i < order.size(); ++i)
    if (delivered[i]) bits.push_back(decisions[i]);
  for (FusionRule rule : {FusionRule::And, FusionRule::Or, FusionRule::Voting})
    if (std::find(rules_.begin(), rules_.end(), rule) != rules_.end())
      verdicts[rule] = {baseline_combine(rule, bits, cfg_.fusion.voting_quorum),
                        static_cast<double>(std::accumulate(bits.begin(), bits.end(), 0))};

  if (in_band) {
    for (FusionRule rule : rules_) {
      auto vit = verdicts.find(rule);
      if (vit == verdicts.end()) continue;
      cc.windows.at(rule).push(vit->second.first, z, r);
      if (opts_.keep_trace)
        out_.trace.push_back(
            {t, j, k, rule, vit->second.first, z, r, vit->second.second});
    }
    if (opts_.keep_truth) out_.truth.push_back({t, j, k, z});
    out_.stats.truth_checksum ^=
        mix64((static_cast<std::uint64_t>(t) << 20) ^
              (static_cast<std::uint64_t>(j) << 10) ^ static_cast<std::uint64_t>(k) ^
              (static_cast<std::uint64_t>(z) << 63));

    const int d_active = verdicts.at(cfg_.fusion.active_rule).first;
    const MetricsWindow& win = cc.windows.at(cfg_.fusion.active_rule);
    ThresholdFlags flags;
    if (!win.empty())
      flags = check_thresholds(win.rates(cfg_.metrics.literal_false_alarm),
                               cfg_.metrics.limit_md, cfg_.metrics.limit_fa);

    bool vacated = false;
    if (d_active == 1 && managers_[j].lists().ocl.contains(k)) {
      note_switch(managers_[j].on_busy_verdict(k, t0));
      vacated = true;
    }
    if (!vacated && flags.misdetection && cfg_.mgmt.md_flag_switch &&
        t - cc.last_flag_switch >= cfg_.mgmt.flag_cooldown_qps &&
        managers_[j].lists().ocl.contains(k)) {
      // Persistent misses mean sensing on this channel cannot be trusted;
      // move the cell away from it.
      cc.last_flag_switch = t;
      note_switch(managers_[j].on_busy_verdict(k, t0));
      vacated = true;
    }
    if (vacated) {
      // The stint on this channel is over. Sensors that are not picked as
      // scouts stop scoring here, and their frozen penalty-heavy histories
      // would invert fresh votes when the cell returns; the next stint
      // starts from a clean slate instead.
      cc.fixed.scores.clear();
      cc.fixed.last_scored.clear();
      cc.fixed.prev_central = -1;
      cc.tuned.scores.clear();
      cc.tuned.last_scored.clear();
      cc.tuned.prev_central = -1;
      refresh_gates();
      reassign();
    }
    if ((flags.misdetection || flags.false_alarm) && cfg_.mgmt.escalation)
      scheduler_.request_escalation(k);

    if (tuned_enabled_ && cc.events % cfg_.fusion.adapt_period == 0) {
      const MetricsWindow& tw = cc.windows.at(FusionRule::McLdsAdaptive);
      if (!tw.empty()) {
        const WindowRates wr = tw.rates(cfg_.metrics.literal_false_alarm);
        cc.tuned.temporal = adapt(wr.p_md, wr.p_fa, cfg_.fusion.adapt);
      }
    }
  } else {
    // Out-of-band verdict, under the active rule, updates the channel lists.
    managers_[j].obs_update(k, verdicts.at(cfg_.fusion.active_rule).first == 0, t0);
  }
}

PerfMatrix Engine::build_matrix(FusionRule rule) {
  PerfMatrix m(cfg_.num_cells, cfg_.num_channels);
  for (CellId j = 0; j < cfg_.num_cells; ++j)
    for (ChannelId k = 1; k <= cfg_.num_channels; ++k) {
      auto& slot = ctx_[static_cast<size_t>(j) * cfg_.num_channels + (k - 1)];
      if (!slot) continue;
      auto wit = slot->windows.find(rule);
      if (wit == slot->windows.end() || wit->second.empty()) continue;
      const MetricsWindow& w = wit->second;
      const WindowRates r = w.rates(cfg_.metrics.literal_false_alarm);
      PerfVector v;
      v.nwcf = w.phi();
      v.p_sd = r.p_sd;
      v.p_md = r.p_md;
      v.p_fa = r.p_fa;
      v.chi2 = w.chi2(cfg_.metrics.chi2).value_or(std::numeric_limits<double>::quiet_NaN());
      m.at(j, k) = v;
      m.weight(j, k) = w.size();
    }
  return m;
}

void Engine::snapshot_series(double now) {
  for (FusionRule rule : rules_) {
    try {
      const PerfVector s = weighted_summary(build_matrix(rule));
      out_.series[rule].push_back({now, s});
    } catch (const AllUntracked&) {
    }
  }
}

ResultBundle Engine::run() {
  out_.rules = rules_;
  const int fps = cfg_.clock.frames_per_superframe;
  for (std::int64_t sf = 0; sf < cfg_.horizon_superframes; ++sf) {
    const double sf_start = static_cast<double>(sf) * cfg_.superframe_seconds();
    management_cycle(sf_start);
    scheduler_.begin_superframe();
    for (int f = 0; f < fps; ++f) {
      const std::int64_t frame = sf * fps + f;
      const double now = static_cast<double>(frame) * cfg_.clock.frame_seconds;
      process_switch_completions(now);
      if (!scheduler_.is_qp_frame(f)) continue;
      const QpIndex t = qp_tick_++;
      ++out_.stats.qp_ticks;
      for (CellId j = 0; j < cfg_.num_cells; ++j) {
        const std::set<ChannelId> op = managers_[j].lists().ocl;  // copy: may mutate
        for (ChannelId k : op) {
          const auto plan = scheduler_.plan(k, f);
          if (!plan.due) continue;
          const double t1 = now + cfg_.clock.frame_seconds * plan.sample_multiplier;
          process_sensing(j, k, true, t, frame, now, t1, plan.sample_multiplier);
        }
      }
    }
    if (opts_.series_every_superframes > 0 && (sf + 1) % opts_.series_every_superframes == 0)
      snapshot_series(sf_start + cfg_.superframe_seconds());
  }

  for (FusionRule rule : rules_) out_.perf.emplace(rule, build_matrix(rule));
  for (auto& mgr : managers_) {
    out_.final_lists.push_back(mgr.lists());
    auto& tr = mgr.transitions();
    out_.transitions.insert(out_.transitions.end(), tr.begin(), tr.end());
  }
  // Per-manager logs are chronological; a stable merge on (time, cell)
  // keeps each channel's same-instant edges in event order.
  std::stable_sort(out_.transitions.begin(), out_.transitions.end(),
                   [](const ListTransition& a, const ListTransition& b) {
                     if (a.time != b.time) return a.time < b.time;
                     return a.cell < b.cell;
                   });
  for (CellId j = 0; j < cfg_.num_cells; ++j)
    for (ChannelId k = 1; k <= cfg_.num_channels; ++k) {
      auto& slot = ctx_[static_cast<size_t>(j) * cfg_.num_channels + (k - 1)];
      if (!slot) continue;
      for (const auto& [sid, stream] : slot->sensors)
        out_.sensors.push_back(
            {j, k, sid, stream->scored, stream->last_w, stream->first_negative});
    }
  return out_;
}

}  // namespace

ResultBundle run_simulation(const ScenarioConfig& cfg, const RunOptions& opts) {
  const auto errs = cfg.validate();
  if (!errs.empty()) {
    std::string what = "invalid scenario:";
    for (const auto& e : errs) what += "\n  " + e;
    throw std::invalid_argument(what);
  }
  Engine engine(cfg, opts);
  return engine.run();
}

}  // namespace wransim
