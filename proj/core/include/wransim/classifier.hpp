#pragma once

#include <array>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "wransim/config.hpp"
#include "wransim/radio.hpp"
#include "wransim/types.hpp"

namespace wransim {

struct LogisticParams {
  double theta0 = 0.0;
  double theta1 = 0.0;
};

// P(busy | power) under the logistic model.
double sigmoid(double power, const LogisticParams& p);

struct LabeledSample {
  double power;
  int label;  // 0 idle, 1 busy
};

struct DegenerateLabels : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ridge-penalized Bernoulli log-likelihood and its gradient.
double log_likelihood(const LogisticParams& p, std::span<const LabeledSample> samples,
                      double ridge);
std::array<double, 2> log_likelihood_gradient(const LogisticParams& p,
                                              std::span<const LabeledSample> samples,
                                              double ridge);

struct FitOptions {
  double ridge = 1.0e-3;
  double tol = 1.0e-8;
  int max_iter = 200;
};

// Damped Newton ascent on the penalized likelihood. Throws DegenerateLabels
// when all labels agree, NotConverged when the gradient norm never reaches
// tol within max_iter (e.g. separable data with ridge = 0).
LogisticParams fit_mle(std::span<const LabeledSample> training, const FitOptions& opts);

// Busy probability of the raw threshold test from its error rates and the
// idle prior: (1 - p_md) (1 - prior_h0) + p_fa * prior_h0.
double busy_probability(double p_md, double p_fa, double prior_h0);

struct DecisionRegion {
  double lower_bound;  // busy iff power >= lower_bound
};

// Inverts the logistic predictor at probability p. Requires p in (0, 1);
// returns nullopt for a flat or decreasing predictor (theta1 <= 0), in
// which case callers fall back to the raw power threshold.
std::optional<DecisionRegion> decision_region(const LogisticParams& p, double prob);

inline int binarize(double power, const DecisionRegion& region) {
  return power >= region.lower_bound ? 1 : 0;
}

// Error rates of a lower-bound test on labeled data. Throws DegenerateLabels
// when either class is absent.
DetectionRates empirical_rates(const DecisionRegion& region,
                               std::span<const LabeledSample> test);

// Per-sensor training state: disjoint train/test sample windows, warm-up,
// scheduled and error-triggered refits, and the raw-threshold fallback.
class SensorClassifier {
 public:
  SensorClassifier(const ClassifierConfig& cfg, double raw_threshold);

  void observe(double power, int label);
  bool needs_refit(QpIndex t) const;

  enum class RefitOutcome { Fitted, KeptOld };
  // Fits on the training window and re-derives the decision region from the
  // raw-threshold error rates and the idle prior. Failed fits keep the
  // previous parameters.
  RefitOutcome refit(QpIndex t, const DetectionRates& raw_rates, double prior_h0);

  int decide(double power) const;
  // Raw-threshold error rates counted on the held-out window; nullopt while
  // the window is single-class.
  std::optional<DetectionRates> empirical_raw_rates() const;

  bool fitted() const { return fitted_; }
  const LogisticParams& params() const { return params_; }
  const std::optional<DecisionRegion>& region() const { return region_; }
  double raw_threshold() const { return raw_threshold_; }
  int fit_count() const { return fit_count_; }
  long observed() const { return observed_; }

 private:
  double test_error() const;

  ClassifierConfig cfg_;
  double raw_threshold_;
  std::deque<LabeledSample> train_;
  std::deque<LabeledSample> test_;
  long observed_ = 0;
  bool fitted_ = false;
  LogisticParams params_;
  std::optional<DecisionRegion> region_;
  QpIndex last_fit_ = -1;
  double error_at_fit_ = 0.0;
  int fit_count_ = 0;
};

}  // namespace wransim
