#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wransim/types.hpp"

namespace wransim {

enum class FusionRule { McLds, McLdsAdaptive, And, Or, Voting };

const char* to_string(FusionRule rule);
bool fusion_rule_from_string(const std::string& name, FusionRule& out);

struct IncumbentStation {
  Vec2 position;
  ChannelId channel = 1;
  double coverage_radius = 1500.0;  // meters; hard audibility footprint
  double tx_power = 0.0;            // watts; <= 0 means "derive from radio.tx_snr_db"
};

// ON/OFF sojourn statistics for the incumbent on one channel.
struct ChannelActivity {
  double mean_on = 5.0;     // seconds
  double mean_off = 50.0;   // seconds
  double burstiness = 0.3;  // 0 = exponential sojourns, 1 = heavy-tailed, mixture between
};

struct ActivityConfig {
  ChannelActivity base;
  std::map<ChannelId, ChannelActivity> overrides;
  const ChannelActivity& for_channel(ChannelId k) const {
    auto it = overrides.find(k);
    return it == overrides.end() ? base : it->second;
  }
};

enum class RateFormula {
  Approx,  // closed form with denominators sqrt(2)*M and sqrt(M*((snr/beta+2)^2-2))
  Clt,     // central-limit form of the gamma sensing statistic
};

enum class SampleSynthesis {
  Gamma,      // draw the power sum directly from its gamma law
  PerSample,  // synthesize every complex baseband sample
};

struct RadioConfig {
  double noise_power = 1.0;             // watts (normalized units)
  double path_loss_exponent = 4.0;
  double path_loss_ref_distance = 1.0;  // meters; gain = (max(d,d0)/d0)^-n
  double shadowing_sigma_db = 4.0;
  double shadowing_corr_distance = 50.0;  // CPEs closer than this share a shadowing draw
  int slow_fading_hold_frames = 16;       // gain redraw period, in frames
  bool rayleigh_fading = true;
  int samples_per_sensing = 200;          // M, per intra-frame quiet period
  double threshold_factor = 1.15;         // lambda = factor * M * noise_power
  double tx_snr_db = 90.0;                // incumbent transmit power over noise
  RateFormula rate_formula = RateFormula::Approx;
  SampleSynthesis sample_synthesis = SampleSynthesis::Gamma;
  double report_tx_power = 10.0;          // report power over noise after uplink power control
  double report_loss_threshold_db = -3.0; // report lost below this received SNR; -inf disables
};

enum class LabelSource { Database, Truth };
enum class RatesSource { Empirical, Analytic };

struct ClassifierConfig {
  int train_window = 200;
  int test_window = 100;
  int warmup_qps = 100;          // samples to gather before the first fit
  int refit_period = 100;        // scheduled refit cadence, in quiet periods
  double refit_error_factor = 2.0;  // refit early when test error exceeds factor * error at fit
  double ridge = 1.0e-3;
  double tol = 1.0e-8;
  int max_iter = 200;
  LabelSource labels = LabelSource::Database;
  RatesSource rates = RatesSource::Empirical;
  double prior_override = -1.0;  // fixed Pr(idle); < 0 uses the rolling database estimate
  int prior_window = 500;
};

struct AdaptConsts {
  double a = 8.0;
  double b = 12.0;
  double c = 0.5;
  double d = 0.4;
};

struct FusionConfig {
  FusionRule active_rule = FusionRule::McLds;   // the rule that drives channel management
  std::vector<FusionRule> compare_rules = {
      FusionRule::McLds, FusionRule::McLdsAdaptive, FusionRule::And, FusionRule::Or,
      FusionRule::Voting};
  double gamma = 1.0;  // mild reward/penalty magnitude
  double zeta = 2.0;   // strong reward/penalty magnitude; requires 0 < gamma < zeta
  std::map<ChannelId, std::pair<double, double>> score_overrides;  // channel -> (gamma, zeta)
  double alpha = 0.7;      // temporal discount
  int historic_count = 8;  // N, scores per confidence sum
  AdaptConsts adapt;
  int adapt_period = 50;   // quiet periods between parameter updates
  bool normalize_report_gains = false;  // divide reporting gains by their cell mean
  int voting_quorum = 0;   // 0 = majority of the participating sensors
};

enum class Chi2Mode { Counts, Literal };

struct MetricsConfig {
  int window = 200;        // nu, quiet periods per sliding window
  double limit_md = 0.1;
  double limit_fa = 0.1;
  bool literal_false_alarm = false;  // count confirmations instead of false alarms
  Chi2Mode chi2 = Chi2Mode::Counts;
};

struct ClockConfig {
  double frame_seconds = 0.010;
  int frames_per_superframe = 16;
  int qp_every_frames = 2;  // intra-frame quiet period cadence
};

struct MgmtConfig {
  double obs_period = 2.0;        // seconds between out-of-band sensings per channel
  double promotion_idle = 30.0;   // continuous idle span required for backup promotion
  double max_sense_gap = 6.0;     // longest allowed spacing inside that span
  double channel_move_time = 2.0; // switch completion deadline, seconds
  int operating_per_cell = 1;
  int initial_backup_per_cell = 1;
  double obs_fraction = 0.3;      // fraction of CPEs that also take out-of-band duty
  bool md_flag_switch = true;     // vacate a channel whose misdetection rate trips the limit
  bool escalation = true;         // schedule a long quiet period when detection misses the limit
  int flag_cooldown_qps = 200;    // quiet periods between flag-driven switches per channel
};

struct DatabaseConfig {
  double error_prob = 0.1;  // per-query flip probability
  double staleness = 1.0;   // seconds of lag behind ground truth
};

struct FaultConfig {
  int byzantine_per_cell = 0;  // CPEs per cell that always report the inverted truth
};

struct ScenarioConfig {
  int num_cells = 0;
  int num_channels = 0;
  double cell_radius = 1000.0;  // meters
  int cpes_per_cell = 10;
  std::vector<IncumbentStation> stations;
  int auto_stations = 0;              // additionally place this many stations from the seed
  double auto_coverage_radius = 1500.0;
  std::map<CellId, std::set<ChannelId>> disallowed;  // per-cell regulator exclusions
  ActivityConfig activity;
  RadioConfig radio;
  ClassifierConfig classifier;
  FusionConfig fusion;
  MetricsConfig metrics;
  ClockConfig clock;
  MgmtConfig mgmt;
  DatabaseConfig database;
  FaultConfig faults;
  std::uint64_t seed = 0;
  std::int64_t horizon_superframes = 400;

  double qp_period_seconds() const {
    return clock.frame_seconds * clock.qp_every_frames;
  }
  double superframe_seconds() const {
    return clock.frame_seconds * clock.frames_per_superframe;
  }
  // Effective (gamma, zeta) for one channel.
  std::pair<double, double> score_for(ChannelId k) const {
    auto it = fusion.score_overrides.find(k);
    if (it != fusion.score_overrides.end()) return it->second;
    return {fusion.gamma, fusion.zeta};
  }

  // Returns human-readable violations; empty means the scenario is runnable.
  std::vector<std::string> validate() const;
};

}  // namespace wransim
