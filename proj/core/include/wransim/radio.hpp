#pragma once

#include <cstdint>
#include <vector>

#include "wransim/config.hpp"
#include "wransim/rng.hpp"
#include "wransim/topology.hpp"
#include "wransim/types.hpp"

namespace wransim {

// Upper tail of the standard normal distribution.
double q_function(double x);

// Distance term of a link gain under the reference-distance power law.
double path_gain(double dist, const RadioConfig& radio);

// Slow-fading link gains. Every gain is path loss x log-normal shadowing x
// squared-magnitude multipath, redrawn once per hold window. Shadowing is
// shared between sensors of the same correlation group (positions closer
// than the configured distance), per remote endpoint, so nearby CPEs see
// the same obstruction. All draws are keyed by (epoch, link), never cached,
// so a gain is a pure function of the master seed.
class GainModel {
 public:
  GainModel(const Topology& topo, const RadioConfig& radio, std::uint64_t master_seed);

  // Gain between a sensor and a station footprint, for the epoch holding `frame`.
  double sensing_gain(CellId cell, SensorId sensor, int station, std::int64_t frame) const;
  // Gain between a CPE and its own base station.
  double reporting_gain(CellId cell, SensorId cpe, std::int64_t frame) const;

  std::int64_t epoch_of(std::int64_t frame) const { return frame / hold_; }
  int group_of(CellId cell, SensorId sensor) const;

 private:
  double shadow_fade(int group, std::uint64_t remote_key, int link_uid,
                     std::int64_t epoch) const;

  const Topology* topo_;
  RadioConfig radio_;
  std::uint64_t seed_;
  std::int64_t hold_;
  std::vector<int> group_;                  // per sensor uid
  std::vector<std::vector<double>> sense_dist_;  // [sensor uid][station]
  std::vector<double> report_dist_;              // [sensor uid] to own BS
  int sensors_per_cell_;
};

struct ReceivedPower {
  double power_sum;  // S, summed sample energy over the quiet period
  double snr_inst;   // aggregate incumbent power over noise at the sensor
};

// Draws the sensing statistic for one quiet period given the aggregate
// incumbent power reaching the sensor. Both synthesis modes realize the
// same law: the sum of `samples` squared-magnitude complex Gaussian
// samples of per-sample power (noise_power + incumbent_power).
ReceivedPower sense_power(double incumbent_power, int samples, const RadioConfig& radio,
                          SplitMixEngine& eng);

struct DetectionRates {
  double p_md;
  double p_fa;
};

// Closed-form misdetection / false-alarm approximations of the threshold
// detector S >= snr_min * noise_power. The default form keeps the
// denominators sqrt(2)*M and sqrt(M*((snr/beta+2)^2-2)); the CLT variant
// uses the normal limit of the gamma sensing statistic. Throws
// std::domain_error when an intermediate is non-finite (e.g. beta_sen = 0).
DetectionRates analytic_rates(double snr_inst, double snr_min, int samples, double beta_sen,
                              RateFormula variant);

}  // namespace wransim
