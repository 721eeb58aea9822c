#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wransim/classifier.hpp"
#include "wransim/fusion.hpp"
#include "wransim/radio.hpp"
#include "wransim/rng.hpp"
#include "wransim/simulator.hpp"

namespace {

using namespace wransim;

// Sensing-statistic synthesis: one gamma draw versus M per-sample draws.
void BM_SensePower(benchmark::State& state, SampleSynthesis mode) {
  RadioConfig radio;
  radio.sample_synthesis = mode;
  radio.samples_per_sensing = static_cast<int>(state.range(0));
  SplitMixEngine eng(42);
  for (auto _ : state) {
    const ReceivedPower rp =
        sense_power(2.0, radio.samples_per_sensing, radio, eng);
    benchmark::DoNotOptimize(rp.power_sum);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_SensePower, gamma, SampleSynthesis::Gamma)->Arg(200)->Arg(2000);
BENCHMARK_CAPTURE(BM_SensePower, per_sample, SampleSynthesis::PerSample)
    ->Arg(200)
    ->Arg(2000);

void BM_AnalyticRates(benchmark::State& state, RateFormula variant) {
  double snr = 0.3;
  for (auto _ : state) {
    const DetectionRates dr = analytic_rates(snr, 230.0, 200, 1.0, variant);
    benchmark::DoNotOptimize(dr.p_md);
    snr = snr < 4.0 ? snr + 1e-3 : 0.3;  // defeat constant folding
  }
}
BENCHMARK_CAPTURE(BM_AnalyticRates, approx, RateFormula::Approx);
BENCHMARK_CAPTURE(BM_AnalyticRates, clt, RateFormula::Clt);

// Newton fit on well-separated synthetic power samples.
void BM_FitMle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 gen(7);
  std::normal_distribution<double> idle(200.0, 12.0), busy(260.0, 18.0);
  std::vector<LabeledSample> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int label = i % 2;
    samples.push_back({label ? busy(gen) : idle(gen), label});
  }
  const FitOptions opts;
  for (auto _ : state) {
    const LogisticParams p = fit_mle(samples, opts);
    benchmark::DoNotOptimize(p.theta1);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_FitMle)->Arg(64)->Arg(256)->Arg(1024);

void BM_Confidence(benchmark::State& state) {
  ScoreHistory hist(16);
  const TemporalParams tp;
  double s = 1.0;
  for (auto _ : state) {
    hist.push(s);
    s = -s;
    benchmark::DoNotOptimize(confidence(hist, tp));
  }
}
BENCHMARK(BM_Confidence);

// End-to-end closed loop at a small scale, milliseconds per run.
void BM_RunSimulation(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.num_cells = 2;
  cfg.num_channels = 4;
  cfg.cpes_per_cell = 6;
  cfg.auto_stations = 4;
  cfg.seed = 11;
  cfg.horizon_superframes = state.range(0);
  cfg.activity.base = {0.5, 1.5, 0.3};
  cfg.radio.path_loss_ref_distance = 30.0;
  cfg.radio.tx_snr_db = 40.0;
  cfg.classifier.warmup_qps = 40;
  cfg.classifier.train_window = 80;
  cfg.classifier.test_window = 40;
  RunOptions opts;
  opts.series_every_superframes = 0;
  const std::int64_t qps_per_run = cfg.horizon_superframes *
      (cfg.clock.frames_per_superframe / cfg.clock.qp_every_frames);
  for (auto _ : state) {
    const ResultBundle r = run_simulation(cfg, opts);
    benchmark::DoNotOptimize(r.stats.sensing_checksum);
  }
  state.SetItemsProcessed(state.iterations() * qps_per_run);
}
BENCHMARK(BM_RunSimulation)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
