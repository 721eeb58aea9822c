#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "wransim/metrics.hpp"

using namespace wransim;

namespace {

MetricsWindow window_of(const std::vector<int>& d, const std::vector<int>& z,
                        int capacity = 64) {
  MetricsWindow w(capacity);
  for (size_t i = 0; i < d.size(); ++i) w.push(d[i], z[i], 0);
  return w;
}

}  // namespace

TEST_CASE("window rates on a pinned stream") {
  const MetricsWindow w = window_of({1, 1, 1, 0}, {0, 1, 1, 1});
  const WindowRates std_rates = w.rates(false);
  CHECK(std_rates.p_md == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std_rates.p_sd == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std_rates.p_fa == doctest::Approx(0.25).epsilon(1e-14));
  // Literal mode counts confirmed-busy slots instead.
  CHECK(w.rates(true).p_fa == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("eviction keeps only the newest capacity entries") {
  MetricsWindow w(3);
  w.push(1, 1, 1);
  w.push(0, 0, 0);
  w.push(1, 0, 1);
  w.push(0, 1, 0);  // evicts the first entry
  CHECK(w.size() == 3);
  CHECK(w.total_pushed() == 4);
  const auto entries = w.ordered();
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].d == 0);
  CHECK(entries[2].z == 1);
  const WindowRates r = w.rates();
  CHECK(r.p_md == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r.p_fa == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(r.p_sd == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("incremental sums always equal a recomputation from the entries") {
  std::mt19937 rng(404);
  std::bernoulli_distribution coin(0.4);
  MetricsWindow w(7);
  for (int i = 0; i < 500; ++i) {
    w.push(coin(rng), coin(rng), coin(rng));
    const auto entries = w.ordered();
    int sd = 0, sz = 0, sdz = 0, match = 0;
    for (const auto& e : entries) {
      sd += e.d;
      sz += e.z;
      sdz += e.d * e.z;
      match += e.d == e.z;
    }
    const double n = static_cast<double>(entries.size());
    const WindowRates r = w.rates();
    CHECK(r.p_md == doctest::Approx((sz - sdz) / n).epsilon(1e-12));
    CHECK(r.p_fa == doctest::Approx((sd - sdz) / n).epsilon(1e-12));
    CHECK(r.p_sd == doctest::Approx(match / n).epsilon(1e-12));
  }
}

TEST_CASE("chi-square in counts mode with pinned values") {
  const MetricsWindow w = window_of({1, 1, 0, 0}, {1, 0, 0, 0});
  CHECK(w.chi2(Chi2Mode::Counts).value() ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  // An all-idle truth skips the empty busy category.
  const MetricsWindow idle = window_of({1, 0}, {0, 0});
  CHECK(idle.chi2(Chi2Mode::Counts).value() == doctest::Approx(0.5).epsilon(1e-14));
  // Perfect decisions give zero.
  const MetricsWindow perfect = window_of({1, 0, 1}, {1, 0, 1});
  CHECK(perfect.chi2(Chi2Mode::Counts).value() == 0.0);
}

TEST_CASE("chi-square in literal mode counts misses") {
  const MetricsWindow w = window_of({0, 1, 0}, {1, 1, 0});
  CHECK(w.chi2(Chi2Mode::Literal).value() == 1.0);
  const MetricsWindow idle = window_of({1, 0}, {0, 0});
  CHECK_FALSE(idle.chi2(Chi2Mode::Literal).has_value());
}

TEST_CASE("phi correlation anchors") {
  CHECK(window_of({1, 0, 1}, {1, 0, 1}).phi() == 1.0);
  CHECK(window_of({1, 0}, {0, 1}).phi() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(window_of({1, 1, 0, 0}, {1, 0, 1, 0}).phi() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(window_of({1, 1, 0, 0}, {1, 1, 1, 0}).phi() ==
        doctest::Approx(0.5773502691896258).epsilon(1e-14));
  // Degenerate streams: identical gives 1, anything else 0.
  CHECK(window_of({1, 1}, {1, 1}).phi() == 1.0);
  CHECK(window_of({1, 1}, {1, 0}).phi() == 0.0);
  CHECK(window_of({0, 0, 0}, {1, 0, 1}).phi() == 0.0);
}

TEST_CASE("empty windows refuse rates and correlation but not chi-square") {
  const MetricsWindow w(5);
  CHECK_THROWS_AS(w.rates(), EmptyWindow);
  CHECK_THROWS_AS(w.phi(), EmptyWindow);
  CHECK_FALSE(w.chi2(Chi2Mode::Counts).has_value());
  CHECK_FALSE(w.chi2(Chi2Mode::Literal).has_value());
}

TEST_CASE("matrix indexing is row-major with one-based channels") {
  PerfMatrix m(2, 3);
  m.at(0, 1) = PerfVector{0.1, 0, 0, 0, 0};
  m.at(1, 3) = PerfVector{0.9, 0, 0, 0, 0};
  m.weight(0, 1) = 10;
  m.weight(1, 3) = 30;
  CHECK(m.entries[0].has_value());
  CHECK(m.entries[5].has_value());
  CHECK_FALSE(m.entries[1].has_value());
  CHECK(m.weights[5] == 30);
}

TEST_CASE("weighted summary averages tracked entries by sample count") {
  PerfMatrix m(1, 3);
  m.at(0, 1) = PerfVector{1.0, 0.8, 0.1, 0.2, 2.0};
  m.weight(0, 1) = 1;
  m.at(0, 3) = PerfVector{0.0, 0.4, 0.3, 0.0, 6.0};
  m.weight(0, 3) = 3;
  const PerfVector s = weighted_summary(m);
  CHECK(s.nwcf == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(s.p_sd == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.p_md == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(s.p_fa == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(s.chi2 == doctest::Approx(5.0).epsilon(1e-14));

  const PerfMatrix empty(2, 2);
  CHECK_THROWS_AS(weighted_summary(empty), AllUntracked);
}

TEST_CASE("network correlation weights each window by its fill") {
  const MetricsWindow perfect = window_of({1, 0, 1, 0, 1, 0}, {1, 0, 1, 0, 1, 0});
  const MetricsWindow uncorr = window_of({1, 1, 0, 0}, {1, 0, 1, 0});
  const CorrelationResult res =
      correlation_and_nwcf({&perfect, nullptr, &uncorr}, 1, 3);
  REQUIRE(res.matrix.size() == 3);
  CHECK(res.matrix[0].value() == 1.0);
  CHECK_FALSE(res.matrix[1].has_value());
  CHECK(res.matrix[2].value() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(res.nwcf == doctest::Approx(0.6).epsilon(1e-14));

  CHECK_THROWS_AS(correlation_and_nwcf({nullptr, nullptr}, 1, 2), AllUntracked);
}

TEST_CASE("threshold comparison is strict") {
  const WindowRates at_limit{0.1, 0.1, 0.8};
  CHECK_FALSE(check_thresholds(at_limit, 0.1, 0.1).misdetection);
  CHECK_FALSE(check_thresholds(at_limit, 0.1, 0.1).false_alarm);
  const WindowRates over{0.1 + 1e-9, 0.1 + 1e-9, 0.8};
  CHECK(check_thresholds(over, 0.1, 0.1).misdetection);
  CHECK(check_thresholds(over, 0.1, 0.1).false_alarm);
}
