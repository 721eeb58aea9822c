#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "wransim/classifier.hpp"

using namespace wransim;

TEST_CASE("sigmoid anchors and symmetry") {
  CHECK(sigmoid(0.0, {0.0, 1.0}) == 0.5);
  CHECK(sigmoid(std::log(3.0), {0.0, 1.0}) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(sigmoid(-800.0, {0.0, 1.0}) == doctest::Approx(0.0).epsilon(1e-300));
  CHECK(sigmoid(800.0, {0.0, 1.0}) == 1.0);
  const LogisticParams p{0.4, -1.3};
  CHECK(sigmoid(2.0, p) + sigmoid(2.0, {-0.4, 1.3}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("flat model log-likelihood is n log(1/2)") {
  std::vector<LabeledSample> s{{1.0, 0}, {2.0, 1}, {3.0, 0}, {4.0, 1}};
  CHECK(log_likelihood({0.0, 0.0}, s, 0.0) ==
        doctest::Approx(-4.0 * std::log(2.0)).epsilon(1e-14));
  // The ridge term subtracts ridge * |theta|^2.
  CHECK(log_likelihood({1.0, 2.0}, s, 0.5) ==
        doctest::Approx(log_likelihood({1.0, 2.0}, s, 0.0) - 2.5).epsilon(1e-12));
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> pow_dist(-3.0, 3.0);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<LabeledSample> s;
    for (int i = 0; i < 40; ++i) s.push_back({pow_dist(rng), coin(rng) ? 1 : 0});
    const LogisticParams p{pow_dist(rng) / 3.0, pow_dist(rng) / 3.0};
    const double ridge = 0.01;
    const auto g = log_likelihood_gradient(p, s, ridge);
    const double h = 1e-6;
    const double fd0 = (log_likelihood({p.theta0 + h, p.theta1}, s, ridge) -
                        log_likelihood({p.theta0 - h, p.theta1}, s, ridge)) /
                       (2 * h);
    const double fd1 = (log_likelihood({p.theta0, p.theta1 + h}, s, ridge) -
                        log_likelihood({p.theta0, p.theta1 - h}, s, ridge)) /
                       (2 * h);
    CHECK(g[0] == doctest::Approx(fd0).epsilon(1e-5));
    CHECK(g[1] == doctest::Approx(fd1).epsilon(1e-5));
  }
}

TEST_CASE("fit recovers generating parameters on ample data") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> pow_dist(0.0, 4.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const LogisticParams truth{-2.0, 1.5};
  std::vector<LabeledSample> s;
  for (int i = 0; i < 4000; ++i) {
    const double x = pow_dist(rng);
    s.push_back({x, unit(rng) < sigmoid(x, truth) ? 1 : 0});
  }
  const LogisticParams fit = fit_mle(s, {1e-4, 1e-9, 200});
  CHECK(fit.theta0 == doctest::Approx(truth.theta0).epsilon(0.15));
  CHECK(fit.theta1 == doctest::Approx(truth.theta1).epsilon(0.15));
  // At the optimum the penalized gradient vanishes.
  const auto g = log_likelihood_gradient(fit, s, 1e-4);
  CHECK(std::abs(g[0]) <= 1e-9);
  CHECK(std::abs(g[1]) <= 1e-9);
}

TEST_CASE("degenerate labels and starved iteration budgets throw") {
  std::vector<LabeledSample> ones{{1.0, 1}, {2.0, 1}, {3.0, 1}};
  CHECK_THROWS_AS(fit_mle(ones, {}), DegenerateLabels);
  std::vector<LabeledSample> one{{1.0, 1}};
  CHECK_THROWS_AS(fit_mle(one, {}), DegenerateLabels);

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> pow_dist(-1.0, 1.0);
  std::vector<LabeledSample> noisy;
  for (int i = 0; i < 100; ++i)
    noisy.push_back({pow_dist(rng), i % 3 == 0 ? 1 : 0});
  CHECK_THROWS_AS(fit_mle(noisy, {1e-3, 1e-14, 1}), NotConverged);
}

TEST_CASE("busy probability composes the raw rates with the idle prior") {
  CHECK(busy_probability(0.2, 0.1, 0.5) == doctest::Approx(0.45).epsilon(1e-14));
  CHECK(busy_probability(0.0, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(busy_probability(0.0, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("decision region inverts the predictor") {
  const auto region = decision_region({0.0, 1.0}, 0.75);
  REQUIRE(region.has_value());
  CHECK(region->lower_bound == doctest::Approx(1.0986122886681098).epsilon(1e-14));
  CHECK(binarize(region->lower_bound, *region) == 1);
  CHECK(binarize(region->lower_bound - 1e-9, *region) == 0);

  CHECK_FALSE(decision_region({0.3, 0.0}, 0.5).has_value());
  CHECK_FALSE(decision_region({0.3, -2.0}, 0.5).has_value());
  CHECK_THROWS_AS(decision_region({0.0, 1.0}, 0.0), std::domain_error);
  CHECK_THROWS_AS(decision_region({0.0, 1.0}, 1.0), std::domain_error);
}

TEST_CASE("empirical rates count misses and false alarms per class") {
  std::vector<LabeledSample> test;
  // Busy class: 10 samples, 2 below the bound.
  for (int i = 0; i < 8; ++i) test.push_back({2.0, 1});
  test.push_back({0.5, 1});
  test.push_back({0.7, 1});
  // Idle class: 10 samples, 3 at or above the bound.
  for (int i = 0; i < 7; ++i) test.push_back({0.2, 0});
  for (int i = 0; i < 3; ++i) test.push_back({1.4, 0});
  const DetectionRates r = empirical_rates({1.0}, test);
  CHECK(r.p_md == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(r.p_fa == doctest::Approx(0.3).epsilon(1e-14));

  std::vector<LabeledSample> idle_only{{0.1, 0}, {0.2, 0}};
  CHECK_THROWS_AS(empirical_rates({1.0}, idle_only), DegenerateLabels);
}

namespace {

ClassifierConfig quick_cfg() {
  ClassifierConfig cfg;
  cfg.train_window = 60;
  cfg.test_window = 30;
  cfg.warmup_qps = 12;
  cfg.refit_period = 10;
  cfg.ridge = 1e-3;
  return cfg;
}

}  // namespace

TEST_CASE("sensor classifier warms up, fits and follows its cadence") {
  SensorClassifier cls(quick_cfg(), 5.0);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> lo(0.0, 4.0), hi(6.0, 10.0);
  // Raw threshold fallback before any fit.
  CHECK(cls.decide(5.1) == 1);
  CHECK(cls.decide(4.9) == 0);

  for (int i = 0; i < 11; ++i) {
    cls.observe(i % 2 ? hi(rng) : lo(rng), i % 2);
    CHECK_FALSE(cls.needs_refit(i));  // still warming up
  }
  cls.observe(lo(rng), 0);
  CHECK(cls.needs_refit(12));
  REQUIRE(cls.refit(12, {0.1, 0.1}, 0.5) == SensorClassifier::RefitOutcome::Fitted);
  CHECK(cls.fitted());
  CHECK(cls.fit_count() == 1);
  REQUIRE(cls.region().has_value());
  CHECK(cls.region()->lower_bound > 4.0);
  CHECK(cls.region()->lower_bound < 6.0);
  CHECK(cls.decide(9.0) == 1);
  CHECK(cls.decide(1.0) == 0);

  CHECK_FALSE(cls.needs_refit(13));
  CHECK(cls.needs_refit(22));  // scheduled cadence
}

TEST_CASE("failed refits keep the previous model") {
  SensorClassifier cls(quick_cfg(), 5.0);
  for (int i = 0; i < 15; ++i) cls.observe(1.0 + i * 0.01, 1);  // single class
  CHECK(cls.refit(15, {0.1, 0.1}, 0.5) == SensorClassifier::RefitOutcome::KeptOld);
  CHECK_FALSE(cls.fitted());
  CHECK(cls.fit_count() == 0);
  // Fallback still in force.
  CHECK(cls.decide(4.9) == 0);
  // The held-out window is single-class, so raw rates are undefined.
  CHECK_FALSE(cls.empirical_raw_rates().has_value());
}

TEST_CASE("raw rate estimate comes from the held-out window") {
  SensorClassifier cls(quick_cfg(), 5.0);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> lo(0.0, 4.0), hi(6.0, 10.0);
  for (int i = 0; i < 60; ++i) cls.observe(i % 2 ? hi(rng) : lo(rng), i % 2);
  const auto rates = cls.empirical_raw_rates();
  REQUIRE(rates.has_value());
  // The classes sit clear of the threshold, so the raw test is perfect.
  CHECK(rates->p_md == 0.0);
  CHECK(rates->p_fa == 0.0);
  CHECK(cls.observed() == 60);
}
