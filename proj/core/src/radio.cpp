#include "wransim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace wransim {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double path_gain(double dist, const RadioConfig& radio) {
  const double d = std::max(dist, radio.path_loss_ref_distance);
  return std::pow(d / radio.path_loss_ref_distance, -radio.path_loss_exponent);
}

GainModel::GainModel(const Topology& topo, const RadioConfig& radio, std::uint64_t master_seed)
    : topo_(&topo), radio_(radio), seed_(master_seed), hold_(radio.slow_fading_hold_frames) {
  sensors_per_cell_ = topo.cells.empty() ? 1 : static_cast<int>(topo.cells[0].cpe_positions.size()) + 1;
  const int total = static_cast<int>(topo.cells.size()) * sensors_per_cell_;
  group_.assign(total, -1);

  // Greedy leader clustering per cell: a sensor joins the first group whose
  // leader lies within the correlation distance.
  std::vector<Vec2> leaders;
  for (CellId j = 0; j < static_cast<CellId>(topo.cells.size()); ++j) {
    const int sensors = static_cast<int>(topo.cells[j].cpe_positions.size()) + 1;
    for (SensorId i = 0; i < sensors; ++i) {
      const Vec2 pos = topo.sensor_position(j, i);
      int assigned = -1;
      if (radio.shadowing_corr_distance > 0.0) {
        for (size_t g = 0; g < leaders.size(); ++g)
          if (distance(pos, leaders[g]) <= radio.shadowing_corr_distance) {
            assigned = static_cast<int>(g);
            break;
          }
      }
      if (assigned < 0) {
        leaders.push_back(pos);
        assigned = static_cast<int>(leaders.size()) - 1;
      }
      group_[topo.sensor_uid(j, i)] = assigned;
    }
  }

  sense_dist_.assign(total, std::vector<double>(topo.stations.size(), 0.0));
  report_dist_.assign(total, 0.0);
  for (CellId j = 0; j < static_cast<CellId>(topo.cells.size()); ++j) {
    const int sensors = static_cast<int>(topo.cells[j].cpe_positions.size()) + 1;
    for (SensorId i = 0; i < sensors; ++i) {
      const int uid = topo.sensor_uid(j, i);
      const Vec2 pos = topo.sensor_position(j, i);
      for (size_t s = 0; s < topo.stations.size(); ++s)
        sense_dist_[uid][s] = distance(pos, topo.stations[s].position);
      report_dist_[uid] = distance(pos, topo.cells[j].bs_position);
    }
  }
}

int GainModel::group_of(CellId cell, SensorId sensor) const {
  return group_[topo_->sensor_uid(cell, sensor)];
}

double GainModel::shadow_fade(int group, std::uint64_t remote_key, int link_uid,
                              std::int64_t epoch) const {
  double gain = 1.0;
  if (radio_.shadowing_sigma_db > 0.0) {
    SplitMixEngine eng(derive_seed(seed_, stream::fading, 1u, static_cast<std::uint64_t>(group),
                                   remote_key, static_cast<std::uint64_t>(epoch)));
    std::normal_distribution<double> shadow_db(0.0, radio_.shadowing_sigma_db);
    gain *= db_to_linear(shadow_db(eng));
  }
  if (radio_.rayleigh_fading) {
    SplitMixEngine eng(derive_seed(seed_, stream::fading, 2u,
                                   static_cast<std::uint64_t>(link_uid), remote_key,
                                   static_cast<std::uint64_t>(epoch)));
    std::exponential_distribution<double> power(1.0);
    gain *= power(eng);
  }
  return gain;
}

double GainModel::sensing_gain(CellId cell, SensorId sensor, int station,
                               std::int64_t frame) const {
  const int uid = topo_->sensor_uid(cell, sensor);
  const std::uint64_t remote = hash_combine(0x5354u, static_cast<std::uint64_t>(station));
  return path_gain(sense_dist_[uid][station], radio_) *
         shadow_fade(group_[uid], remote, uid, epoch_of(frame));
}

double GainModel::reporting_gain(CellId cell, SensorId cpe, std::int64_t frame) const {
  // The reporting link runs closed-loop power control, so the deterministic
  // distance decay is compensated at the CPE; what remains is the shadowing
  // and fading residual around unit gain. Without compensation the nearest
  // CPE outweighs the rest of the cell by the path-loss dynamic range and
  // the gain-weighted combine degenerates to a single report.
  const int uid = topo_->sensor_uid(cell, cpe);
  const std::uint64_t remote = hash_combine(0x4253u, static_cast<std::uint64_t>(cell));
  return shadow_fade(group_[uid], remote, uid, epoch_of(frame));
}

ReceivedPower sense_power(double incumbent_power, int samples, const RadioConfig& radio,
                          SplitMixEngine& eng) {
  const double per_sample = radio.noise_power + incumbent_power;
  ReceivedPower out;
  out.snr_inst = incumbent_power / radio.noise_power;
  if (radio.sample_synthesis == SampleSynthesis::PerSample) {
    // Complex baseband samples of total per-sample power; the incumbent
    // contribution is itself Gaussian, so superposition keeps the law.
    std::normal_distribution<double> comp(0.0, std::sqrt(per_sample / 2.0));
    double sum = 0.0;
    for (int m = 0; m < samples; ++m) {
      const double re = comp(eng), im = comp(eng);
      sum += re * re + im * im;
    }
    out.power_sum = sum;
  } else {
    std::gamma_distribution<double> law(static_cast<double>(samples), per_sample);
    out.power_sum = law(eng);
  }
  return out;
}

DetectionRates analytic_rates(double snr_inst, double snr_min, int samples, double beta_sen,
                              RateFormula variant) {
  if (samples < 1) throw std::domain_error("analytic_rates: samples must be >= 1");
  const double m = static_cast<double>(samples);
  DetectionRates out{};
  if (variant == RateFormula::Approx) {
    const double ratio = snr_inst / beta_sen;
    const double md_num = snr_min - (1.0 + snr_inst) / beta_sen * m;
    const double md_den = std::sqrt(m * ((ratio + 2.0) * (ratio + 2.0) - 2.0));
    const double fa_num = snr_min - m;
    const double fa_den = std::numbers::sqrt2 * m;
    if (!std::isfinite(md_num) || !std::isfinite(md_den) || md_den <= 0.0)
      throw std::domain_error("analytic_rates: non-finite misdetection intermediate");
    out.p_md = 1.0 - q_function(md_num / md_den);
    out.p_fa = q_function(fa_num / fa_den);
  } else {
    // Normal limit of the gamma statistic: mean M(1+g), std sqrt(M)(1+g),
    // with g the received over-noise ratio after the sensing-channel gain.
    const double g = snr_inst * beta_sen;
    if (!std::isfinite(g)) throw std::domain_error("analytic_rates: non-finite received snr");
    out.p_md = 1.0 - q_function((snr_min - m * (1.0 + g)) / (std::sqrt(m) * (1.0 + g)));
    out.p_fa = q_function((snr_min - m) / std::sqrt(m));
  }
  out.p_md = std::clamp(out.p_md, 0.0, 1.0);
  out.p_fa = std::clamp(out.p_fa, 0.0, 1.0);
  return out;
}

}  // namespace wransim
