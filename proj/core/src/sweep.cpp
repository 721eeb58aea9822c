#include "wransim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "wransim/metrics.hpp"
#include "wransim/rng.hpp"
#include "wransim/simulator.hpp"

namespace wransim {

namespace {

constexpr std::pair<const char*, double PerfVector::*> kMetrics[] = {
    {"nwcf", &PerfVector::nwcf}, {"p_sd", &PerfVector::p_sd},
    {"p_md", &PerfVector::p_md}, {"p_fa", &PerfVector::p_fa},
    {"chi2", &PerfVector::chi2}};

int worker_count() {
  if (const char* env = std::getenv("WRANSIM_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

ScenarioConfig apply_sweep_value(const ScenarioConfig& base, const SweepSpec& spec,
                                 double value) {
  ScenarioConfig cfg = base;
  switch (spec.variable) {
    case SweepSpec::Variable::TxSnrDb:
      cfg.radio.tx_snr_db = value;
      break;
    case SweepSpec::Variable::Iar: {
      // ON/OFF ratio sweep at a fixed appearance frequency: the cycle
      // length 1/F is preserved while its split changes.
      const double f = spec.iaf_fixed;
      cfg.activity.base.mean_on = value / (f * (1.0 + value));
      cfg.activity.base.mean_off = 1.0 / (f * (1.0 + value));
      cfg.activity.overrides.clear();
      break;
    }
    case SweepSpec::Variable::Iaf: {
      // Appearance frequency sweep at a fixed ON/OFF ratio.
      const double r = spec.iar_fixed;
      cfg.activity.base.mean_on = r / (value * (1.0 + r));
      cfg.activity.base.mean_off = 1.0 / (value * (1.0 + r));
      cfg.activity.overrides.clear();
      break;
    }
    case SweepSpec::Variable::ErrorProb:
      cfg.database.error_prob = value;
      break;
  }
  return cfg;
}

SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("sweep: no values to sweep over");
  if (spec.seeds_per_point < 1)
    throw std::invalid_argument("sweep: seeds_per_point must be at least 1");

  std::vector<FusionRule> rules =
      spec.rules.empty() ? base.fusion.compare_rules : spec.rules;
  if (rules.empty()) throw std::invalid_argument("sweep: no rules to evaluate");
  FusionRule active = rules.front();
  for (FusionRule r : rules)
    if (r == FusionRule::McLds) active = r;

  const int points = static_cast<int>(spec.values.size());
  const int reps = spec.seeds_per_point;
  const int jobs = points * reps;

  struct RunScalars {
    std::map<FusionRule, PerfVector> by_rule;
    bool valid = false;
  };
  std::vector<RunScalars> runs(jobs);

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto work = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= jobs) return;
      try {
        const int point = i / reps;
        const int rep = i % reps;
        ScenarioConfig cfg = apply_sweep_value(base, spec, spec.values[point]);
        cfg.seed = sweep_point_seed(base.seed, spec.values[point], rep);
        cfg.fusion.compare_rules = rules;
        cfg.fusion.active_rule = active;
        RunOptions opts;
        opts.series_every_superframes = 0;
        const ResultBundle bundle = run_simulation(cfg, opts);
        RunScalars& rs = runs[i];
        for (FusionRule rule : rules) {
          auto it = bundle.perf.find(rule);
          if (it == bundle.perf.end()) continue;
          try {
            rs.by_rule[rule] = weighted_summary(it->second);
          } catch (const AllUntracked&) {
          }
        }
        rs.valid = true;
      } catch (...) {
        std::scoped_lock lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int workers = std::min(worker_count(), jobs);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  SweepResult out;
  out.rules = rules;
  for (const auto& [name, field] : kMetrics) out.metrics.emplace_back(name);
  for (const auto& [name, field] : kMetrics) {
    auto& per_rule = out.stats[name];
    for (FusionRule rule : rules) {
      auto& pts = per_rule[rule];
      pts.reserve(points);
      for (int p = 0; p < points; ++p) {
        SweepPointStat stat;
        stat.value = spec.values[p];
        double sum = 0.0;
        std::vector<double> vals;
        for (int rep = 0; rep < reps; ++rep) {
          const RunScalars& rs = runs[p * reps + rep];
          auto it = rs.by_rule.find(rule);
          if (!rs.valid || it == rs.by_rule.end()) continue;
          const double v = it->second.*field;
          if (!std::isfinite(v)) continue;
          vals.push_back(v);
          sum += v;
        }
        stat.runs = static_cast<int>(vals.size());
        if (stat.runs > 0) {
          stat.mean = sum / stat.runs;
          double ss = 0.0;
          for (double v : vals) ss += (v - stat.mean) * (v - stat.mean);
          stat.stddev = stat.runs > 1 ? std::sqrt(ss / (stat.runs - 1)) : 0.0;
        }
        pts.push_back(stat);
      }
    }
  }
  return out;
}

void write_sweep_csvs(const std::filesystem::path& dir, const SweepResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec && !std::filesystem::is_directory(dir))
    throw std::runtime_error(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  for (const auto& [metric, per_rule] : result.stats)
    for (const auto& [rule, pts] : per_rule) {
      const auto file = dir / fmt::format("sweep_{}_{}.csv", metric, to_string(rule));
      std::ofstream out(file);
      if (!out) throw std::runtime_error(fmt::format("cannot write {}", file.string()));
      out << "value,mean,stddev,runs\n";
      for (const SweepPointStat& p : pts)
        out << fmt::format("{},{},{},{}\n", p.value, p.mean, p.stddev, p.runs);
    }
}

}  // namespace wransim
