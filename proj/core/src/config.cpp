#include "wransim/config.hpp"

#include <cmath>
#include <fmt/format.h>

namespace wransim {

const char* to_string(FusionRule rule) {
  switch (rule) {
    case FusionRule::McLds: return "mc-lds";
    case FusionRule::McLdsAdaptive: return "mc-lds-adaptive";
    case FusionRule::And: return "and";
    case FusionRule::Or: return "or";
    case FusionRule::Voting: return "voting";
  }
  return "?";
}

bool fusion_rule_from_string(const std::string& name, FusionRule& out) {
  for (FusionRule r : {FusionRule::McLds, FusionRule::McLdsAdaptive, FusionRule::And,
                       FusionRule::Or, FusionRule::Voting}) {
    if (name == to_string(r)) {
      out = r;
      return true;
    }
  }
  return false;
}

namespace {

void check_activity(const ChannelActivity& a, const std::string& where,
                    std::vector<std::string>& errs) {
  if (a.mean_on <= 0.0) errs.push_back(where + ": mean_on must be > 0");
  if (a.mean_off <= 0.0) errs.push_back(where + ": mean_off must be > 0");
  if (a.burstiness < 0.0 || a.burstiness > 1.0)
    errs.push_back(where + ": burstiness must lie in [0, 1]");
}

}  // namespace

std::vector<std::string> ScenarioConfig::validate() const {
  std::vector<std::string> errs;
  if (num_cells < 1) errs.push_back("scenario.cells: need at least one cell");
  if (num_channels < 1) errs.push_back("scenario.channels: need at least one channel");
  if (cell_radius <= 0.0) errs.push_back("scenario.cell_radius must be > 0");
  if (cpes_per_cell < 0) errs.push_back("scenario.cpes_per_cell must be >= 0");
  if (horizon_superframes < 0) errs.push_back("scenario.horizon_superframes must be >= 0");
  if (auto_stations < 0) errs.push_back("scenario.auto_stations must be >= 0");
  if (auto_coverage_radius <= 0.0) errs.push_back("scenario.auto_coverage_radius must be > 0");

  for (size_t i = 0; i < stations.size(); ++i) {
    const auto& s = stations[i];
    if (s.channel < 1 || s.channel > num_channels)
      errs.push_back(fmt::format("scenario.station[{}]: channel {} outside 1..{}", i, s.channel,
                                 num_channels));
    if (s.coverage_radius <= 0.0)
      errs.push_back(fmt::format("scenario.station[{}]: coverage_radius must be > 0", i));
  }
  for (const auto& [cell, chans] : disallowed) {
    if (cell < 0 || cell >= num_cells)
      errs.push_back(fmt::format("scenario.disallowed: cell {} outside 0..{}", cell,
                                 num_cells - 1));
    for (ChannelId k : chans)
      if (k < 1 || k > num_channels)
        errs.push_back(fmt::format("scenario.disallowed: channel {} outside 1..{}", k,
                                   num_channels));
  }

  check_activity(activity.base, "activity", errs);
  for (const auto& [k, a] : activity.overrides) {
    if (k < 1 || k > num_channels)
      errs.push_back(fmt::format("activity.channel: channel {} outside 1..{}", k, num_channels));
    check_activity(a, fmt::format("activity.channel[{}]", k), errs);
  }

  if (radio.noise_power <= 0.0) errs.push_back("radio.noise_power must be > 0");
  if (radio.path_loss_exponent <= 0.0) errs.push_back("radio.path_loss_exponent must be > 0");
  if (radio.path_loss_ref_distance <= 0.0)
    errs.push_back("radio.path_loss_ref_distance must be > 0");
  if (radio.shadowing_sigma_db < 0.0) errs.push_back("radio.shadowing_sigma_db must be >= 0");
  if (radio.shadowing_corr_distance < 0.0)
    errs.push_back("radio.shadowing_corr_distance must be >= 0");
  if (radio.slow_fading_hold_frames < 1)
    errs.push_back("radio.slow_fading_hold_frames must be >= 1");
  if (radio.samples_per_sensing < 1) errs.push_back("radio.samples_per_sensing must be >= 1");
  if (radio.threshold_factor <= 0.0) errs.push_back("radio.threshold_factor must be > 0");
  if (radio.report_tx_power <= 0.0) errs.push_back("radio.report_tx_power must be > 0");

  if (classifier.train_window < 2) errs.push_back("classifier.train_window must be >= 2");
  if (classifier.test_window < 1) errs.push_back("classifier.test_window must be >= 1");
  if (classifier.warmup_qps < 1) errs.push_back("classifier.warmup_qps must be >= 1");
  if (classifier.refit_period < 1) errs.push_back("classifier.refit_period must be >= 1");
  if (classifier.refit_error_factor <= 0.0)
    errs.push_back("classifier.refit_error_factor must be > 0");
  if (classifier.ridge < 0.0) errs.push_back("classifier.ridge must be >= 0");
  if (classifier.tol <= 0.0) errs.push_back("classifier.tol must be > 0");
  if (classifier.max_iter < 1) errs.push_back("classifier.max_iter must be >= 1");
  if (classifier.prior_override >= 0.0 &&
      (classifier.prior_override <= 0.0 || classifier.prior_override >= 1.0))
    errs.push_back("classifier.prior_override must lie in (0, 1) when set");
  if (classifier.prior_window < 1) errs.push_back("classifier.prior_window must be >= 1");

  auto check_score = [&errs](double gamma, double zeta, const std::string& where) {
    if (!(gamma > 0.0 && gamma < zeta))
      errs.push_back(where + fmt::format(": requires 0 < gamma < zeta, got gamma={} zeta={}",
                                         gamma, zeta));
  };
  check_score(fusion.gamma, fusion.zeta, "fusion");
  for (const auto& [k, gz] : fusion.score_overrides)
    check_score(gz.first, gz.second, fmt::format("fusion.score_override[{}]", k));
  if (fusion.alpha <= 0.0 || fusion.alpha >= 1.0)
    errs.push_back("fusion.alpha must lie in (0, 1)");
  if (fusion.historic_count < 1) errs.push_back("fusion.historic_count must be >= 1");
  const AdaptConsts& ac = fusion.adapt;
  if (!(ac.a > 0.0 && ac.b > 0.0 && ac.c > 0.0 && ac.d > 0.0))
    errs.push_back("fusion.adapt: requires a, b, c, d all > 0");
  if (!(ac.b - ac.a > 1.0))
    errs.push_back(fmt::format("fusion.adapt: requires b - a > 1, got a={} b={}", ac.a, ac.b));
  if (!(ac.c + ac.d < 1.0))
    errs.push_back(fmt::format("fusion.adapt: requires c + d < 1, got c={} d={}", ac.c, ac.d));
  if (fusion.adapt_period < 1) errs.push_back("fusion.adapt_period must be >= 1");
  if (fusion.voting_quorum < 0) errs.push_back("fusion.voting_quorum must be >= 0");
  if (fusion.compare_rules.empty()) errs.push_back("fusion.compare_rules must not be empty");

  if (metrics.window < 1) errs.push_back("metrics.window must be >= 1");
  if (metrics.limit_md < 0.0 || metrics.limit_md > 1.0)
    errs.push_back("metrics.limit_md must lie in [0, 1]");
  if (metrics.limit_fa < 0.0 || metrics.limit_fa > 1.0)
    errs.push_back("metrics.limit_fa must lie in [0, 1]");

  if (clock.frame_seconds <= 0.0) errs.push_back("clock.frame_seconds must be > 0");
  if (clock.frames_per_superframe < 1) errs.push_back("clock.frames_per_superframe must be >= 1");
  if (clock.qp_every_frames < 1 || clock.qp_every_frames > clock.frames_per_superframe)
    errs.push_back("clock.qp_every_frames must lie in 1..frames_per_superframe");

  if (mgmt.obs_period <= 0.0) errs.push_back("mgmt.obs_period must be > 0");
  if (mgmt.promotion_idle <= 0.0) errs.push_back("mgmt.promotion_idle must be > 0");
  if (mgmt.max_sense_gap <= 0.0) errs.push_back("mgmt.max_sense_gap must be > 0");
  if (mgmt.channel_move_time < 0.0) errs.push_back("mgmt.channel_move_time must be >= 0");
  if (mgmt.operating_per_cell < 0) errs.push_back("mgmt.operating_per_cell must be >= 0");
  if (mgmt.initial_backup_per_cell < 0)
    errs.push_back("mgmt.initial_backup_per_cell must be >= 0");
  if (mgmt.obs_fraction < 0.0 || mgmt.obs_fraction > 1.0)
    errs.push_back("mgmt.obs_fraction must lie in [0, 1]");
  if (mgmt.flag_cooldown_qps < 0) errs.push_back("mgmt.flag_cooldown_qps must be >= 0");
  if (mgmt.operating_per_cell > 0 && cpes_per_cell > 0 &&
      cpes_per_cell < mgmt.operating_per_cell)
    errs.push_back("scenario.cpes_per_cell must cover every operating channel with a sensor");

  if (database.error_prob < 0.0 || database.error_prob > 1.0)
    errs.push_back("database.error_prob must lie in [0, 1]");
  if (database.staleness < 0.0) errs.push_back("database.staleness must be >= 0");

  if (faults.byzantine_per_cell < 0 || faults.byzantine_per_cell > cpes_per_cell)
    errs.push_back("faults.byzantine_per_cell must lie in 0..cpes_per_cell");

  return errs;
}

}  // namespace wransim
