#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "wransim/config.hpp"
#include "wransim/types.hpp"

namespace wransim {

struct ScoreConfig {
  double gamma = 1.0;  // magnitude when the database confirms the previous central decision
  double zeta = 2.0;   // magnitude when it contradicts it; requires 0 < gamma < zeta
};

// Reward-penalty score for one sensor decision d against the database
// reading r and the previous central decision d_central. Sign follows the
// database (reward iff d == r); magnitude is gamma when the central
// decision agreed with the database and zeta when it did not, so sensors
// that dissent correctly are paid most and loyal mistakes cost most.
double reward_penalty_score(int d, int d_central_prev, int r, const ScoreConfig& sc);

struct TemporalParams {
  double alpha = 0.7;      // discount in (0, 1)
  int historic_count = 8;  // N, scores contributing to the confidence sum
};

// Fixed-capacity ring of a sensor's most recent scores, newest last.
class ScoreHistory {
 public:
  explicit ScoreHistory(int capacity = 16);
  void push(double score);
  int size() const { return count_; }
  // score at age q = 1 (newest), 2, ... size().
  double at_age(int q) const;
  long total_pushed() const { return pushed_; }

 private:
  std::vector<double> buf_;
  int head_ = 0;  // next write slot
  int count_ = 0;
  long pushed_ = 0;
};

// Discounted confidence: sum over the newest min(N, available) scores of
// alpha^age * score, age 1 for the most recent. Empty history gives 0.
double confidence(const ScoreHistory& history, const TemporalParams& tp);

// Signed channel indicator: +w when the sensor says busy, -w when idle.
inline double indicator(double w, int d) { return d ? w : -w; }

struct WeightedReport {
  double x;         // indicator of a delivered CPE report
  double beta_rep;  // reporting-channel gain weighting the report
};

// Central decision: busy iff the base station indicator plus the
// gain-weighted delivered indicators is strictly positive; ties are idle.
int combine(double x_bs, std::span<const WeightedReport> reports);

// Hard-decision baselines over the participating sensors' bits.
// quorum <= 0 selects the majority of the inputs. Throws std::invalid_argument
// on an empty decision set.
int baseline_combine(FusionRule rule, std::span<const int> decisions, int quorum = 0);

// Window-feedback tuning: a high misdetection rate shortens the memory
// (N = floor(b - a * p_md), at least 1) and a high false-alarm rate deepens
// the discounting (alpha = c + d * p_fa, clamped inside (0, 1)).
TemporalParams adapt(double p_md_bar, double p_fa_bar, const AdaptConsts& consts);

}  // namespace wransim
