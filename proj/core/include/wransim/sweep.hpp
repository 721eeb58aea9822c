#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wransim/config.hpp"

namespace wransim {

// One-variable parameter sweep. Each point runs `seeds_per_point`
// replicates; every listed rule is evaluated passively inside the same
// runs, on the same sensor decisions.
struct SweepSpec {
  enum class Variable {
    TxSnrDb,    // incumbent transmit SNR, dB
    Iar,        // ON/OFF ratio at fixed appearance frequency
    Iaf,        // appearance frequency (1 / cycle seconds) at fixed ratio
    ErrorProb,  // database flip probability
  };
  Variable variable = Variable::TxSnrDb;
  std::vector<double> values;
  int seeds_per_point = 20;
  std::vector<FusionRule> rules;  // empty keeps the scenario's comparison set
  double iaf_fixed = 0.1;         // appearance frequency held during ratio sweeps
  double iar_fixed = 0.1;         // ratio held during frequency sweeps
};

const char* to_string(SweepSpec::Variable v);
bool sweep_variable_from_string(const std::string& name, SweepSpec::Variable& out);

// Base scenario with the swept variable set to `value`.
ScenarioConfig apply_sweep_value(const ScenarioConfig& base, const SweepSpec& spec,
                                 double value);

struct SweepPointStat {
  double value = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation over the replicates
  int runs = 0;         // replicates with a defined metric value
};

struct SweepResult {
  std::vector<FusionRule> rules;
  std::vector<std::string> metrics;  // nwcf, p_sd, p_md, p_fa, chi2
  // metric -> rule -> one stat per sweep value, in spec order
  std::map<std::string, std::map<FusionRule, std::vector<SweepPointStat>>> stats;
};

// Runs the sweep on a worker pool. The thread count comes from the
// WRANSIM_WORKERS environment variable, defaulting to the hardware
// concurrency. Each (value, replicate) run gets a seed derived from the
// value itself, so editing the value list never reseeds the other points.
SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec);

// One file per metric and rule: value, mean, stddev, runs.
void write_sweep_csvs(const std::filesystem::path& dir, const SweepResult& result);

}  // namespace wransim
