#include "wransim/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace wransim {

namespace {

// log(1 + e^z) without overflow.
double log1pexp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

bool labels_degenerate(std::span<const LabeledSample> samples) {
  bool saw0 = false, saw1 = false;
  for (const auto& s : samples) (s.label ? saw1 : saw0) = true;
  return !(saw0 && saw1);
}

}  // namespace

double sigmoid(double power, const LogisticParams& p) {
  const double z = p.theta0 + p.theta1 * power;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_likelihood(const LogisticParams& p, std::span<const LabeledSample> samples,
                      double ridge) {
  double ll = 0.0;
  for (const auto& s : samples) {
    const double z = p.theta0 + p.theta1 * s.power;
    ll += s.label * z - log1pexp(z);
  }
  return ll - ridge * (p.theta0 * p.theta0 + p.theta1 * p.theta1);
}

std::array<double, 2> log_likelihood_gradient(const LogisticParams& p,
                                              std::span<const LabeledSample> samples,
                                              double ridge) {
  double g0 = 0.0, g1 = 0.0;
  for (const auto& s : samples) {
    const double r = s.label - sigmoid(s.power, p);
    g0 += r;
    g1 += r * s.power;
  }
  g0 -= 2.0 * ridge * p.theta0;
  g1 -= 2.0 * ridge * p.theta1;
  return {g0, g1};
}

LogisticParams fit_mle(std::span<const LabeledSample> training, const FitOptions& opts) {
  if (training.size() < 2 || labels_degenerate(training))
    throw DegenerateLabels("fit_mle: training labels are single-class");

  LogisticParams p{};
  double ll = log_likelihood(p, training, opts.ridge);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const auto g = log_likelihood_gradient(p, training, opts.ridge);
    if (std::max(std::abs(g[0]), std::abs(g[1])) <= opts.tol) return p;

    // Negated Hessian of the penalized likelihood; positive definite.
    double h00 = 2.0 * opts.ridge, h01 = 0.0, h11 = 2.0 * opts.ridge;
    for (const auto& s : training) {
      const double sig = sigmoid(s.power, p);
      const double w = std::max(sig * (1.0 - sig), 1e-12);
      h00 += w;
      h01 += w * s.power;
      h11 += w * s.power * s.power;
    }
    const double det = h00 * h11 - h01 * h01;
    double d0, d1;
    if (det > 0.0 && std::isfinite(det)) {
      d0 = (h11 * g[0] - h01 * g[1]) / det;
      d1 = (h00 * g[1] - h01 * g[0]) / det;
    } else {  // fall back to a gradient step
      d0 = g[0];
      d1 = g[1];
    }

    // Backtracking line search on the ascent direction.
    double step = 1.0;
    bool improved = false;
    for (int half = 0; half < 40; ++half) {
      LogisticParams cand{p.theta0 + step * d0, p.theta1 + step * d1};
      const double cand_ll = log_likelihood(cand, training, opts.ridge);
      if (cand_ll > ll || (cand_ll == ll && half == 0)) {
        p = cand;
        ll = cand_ll;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) {
      // Near the optimum the likelihood is flat to machine precision while
      // the gradient still contracts quadratically; take the Newton step
      // whenever it shrinks the gradient.
      const LogisticParams cand{p.theta0 + d0, p.theta1 + d1};
      const auto gc = log_likelihood_gradient(cand, training, opts.ridge);
      if (std::max(std::abs(gc[0]), std::abs(gc[1])) <
          std::max(std::abs(g[0]), std::abs(g[1]))) {
        p = cand;
        ll = log_likelihood(cand, training, opts.ridge);
        continue;
      }
      throw NotConverged("fit_mle: line search stalled before reaching tol");
    }
  }
  const auto g = log_likelihood_gradient(p, training, opts.ridge);
  if (std::max(std::abs(g[0]), std::abs(g[1])) <= opts.tol) return p;
  throw NotConverged("fit_mle: gradient norm above tol after max_iter iterations");
}

double busy_probability(double p_md, double p_fa, double prior_h0) {
  return 1.0 - p_md + prior_h0 * (p_fa + p_md - 1.0);
}

std::optional<DecisionRegion> decision_region(const LogisticParams& p, double prob) {
  if (!(prob > 0.0 && prob < 1.0))
    throw std::domain_error("decision_region: probability must lie in (0, 1)");
  if (!(p.theta1 > 0.0)) return std::nullopt;
  const double logit = std::log(prob / (1.0 - prob));
  return DecisionRegion{(logit - p.theta0) / p.theta1};
}

DetectionRates empirical_rates(const DecisionRegion& region,
                               std::span<const LabeledSample> test) {
  long idle = 0, busy = 0, fp = 0, fn = 0;
  for (const auto& s : test) {
    const int d = binarize(s.power, region);
    if (s.label == 0) {
      ++idle;
      fp += d;
    } else {
      ++busy;
      fn += 1 - d;
    }
  }
  if (idle == 0 || busy == 0)
    throw DegenerateLabels("empirical_rates: test labels are single-class");
  return {static_cast<double>(fn) / busy, static_cast<double>(fp) / idle};
}

SensorClassifier::SensorClassifier(const ClassifierConfig& cfg, double raw_threshold)
    : cfg_(cfg), raw_threshold_(raw_threshold) {}

void SensorClassifier::observe(double power, int label) {
  ++observed_;
  // Every third sample is held out for rate estimation and refit triggers.
  if (observed_ % 3 == 0) {
    test_.push_back({power, label});
    if (static_cast<int>(test_.size()) > cfg_.test_window) test_.pop_front();
  } else {
    train_.push_back({power, label});
    if (static_cast<int>(train_.size()) > cfg_.train_window) train_.pop_front();
  }
}

double SensorClassifier::test_error() const {
  if (test_.empty()) return 0.0;
  long wrong = 0;
  for (const auto& s : test_)
    if (decide(s.power) != s.label) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(test_.size());
}

bool SensorClassifier::needs_refit(QpIndex t) const {
  if (observed_ < cfg_.warmup_qps) return false;
  if (!fitted_) return true;
  if (t - last_fit_ >= cfg_.refit_period) return true;
  if (static_cast<int>(test_.size()) >= std::min(cfg_.test_window, 10) &&
      test_error() > cfg_.refit_error_factor * error_at_fit_ && error_at_fit_ > 0.0)
    return true;
  return false;
}

SensorClassifier::RefitOutcome SensorClassifier::refit(QpIndex t,
                                                       const DetectionRates& raw_rates,
                                                       double prior_h0) {
  last_fit_ = t;  // even a failed attempt resets the cadence
  std::vector<LabeledSample> train(train_.begin(), train_.end());
  LogisticParams next;
  try {
    next = fit_mle(train, {cfg_.ridge, cfg_.tol, cfg_.max_iter});
  } catch (const DegenerateLabels&) {
    return RefitOutcome::KeptOld;
  } catch (const NotConverged&) {
    return RefitOutcome::KeptOld;
  }
  params_ = next;
  fitted_ = true;
  ++fit_count_;

  constexpr double eps = 1e-9;
  const double p_star =
      std::clamp(busy_probability(raw_rates.p_md, raw_rates.p_fa, prior_h0), eps, 1.0 - eps);
  if (auto region = decision_region(params_, p_star))
    region_ = *region;
  else
    region_.reset();  // flat predictor: decide() falls back to the raw threshold

  error_at_fit_ = test_error();
  return RefitOutcome::Fitted;
}

int SensorClassifier::decide(double power) const {
  if (region_) return binarize(power, *region_);
  return power >= raw_threshold_ ? 1 : 0;
}

std::optional<DetectionRates> SensorClassifier::empirical_raw_rates() const {
  std::vector<LabeledSample> test(test_.begin(), test_.end());
  try {
    return empirical_rates(DecisionRegion{raw_threshold_}, test);
  } catch (const DegenerateLabels&) {
    return std::nullopt;
  }
}

}  // namespace wransim
