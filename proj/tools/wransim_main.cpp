#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wransim/report.hpp"
#include "wransim/scenario_io.hpp"
#include "wransim/simulator.hpp"
#include "wransim/sweep.hpp"

namespace {

// Exit codes: 0 success, 1 configuration rejected, 2 runtime failure.
constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

struct CommonArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::int64_t horizon = 0;
  std::vector<std::string> rules;
  std::string active;
};

// Loads, overrides, and validates; returns nullopt after printing the
// reason to stderr.
std::optional<wransim::ParsedScenario> load_scenario(const CommonArgs& args) {
  wransim::ParsedScenario parsed;
  try {
    parsed = wransim::parse_config_file(args.config);
  } catch (const wransim::ConfigParseError& e) {
    std::cerr << e.what() << '\n';
    return std::nullopt;
  }
  wransim::ScenarioConfig& cfg = parsed.cfg;
  if (args.seed_set) cfg.seed = args.seed;
  if (args.horizon > 0) cfg.horizon_superframes = args.horizon;
  if (!args.rules.empty()) {
    cfg.fusion.compare_rules.clear();
    for (const std::string& name : args.rules) {
      wransim::FusionRule rule;
      if (!wransim::fusion_rule_from_string(name, rule)) {
        std::cerr << "unknown fusion rule '" << name << "'\n";
        return std::nullopt;
      }
      cfg.fusion.compare_rules.push_back(rule);
    }
    cfg.fusion.active_rule = cfg.fusion.compare_rules.front();
    for (wransim::FusionRule rule : cfg.fusion.compare_rules)
      if (rule == wransim::FusionRule::McLds) cfg.fusion.active_rule = rule;
  }
  if (!args.active.empty()) {
    wransim::FusionRule rule;
    if (!wransim::fusion_rule_from_string(args.active, rule)) {
      std::cerr << "unknown fusion rule '" << args.active << "'\n";
      return std::nullopt;
    }
    cfg.fusion.active_rule = rule;
  }
  const auto errors = cfg.validate();
  if (!errors.empty()) {
    for (const std::string& e : errors) std::cerr << args.config << ": " << e << '\n';
    return std::nullopt;
  }
  return parsed;
}

int cmd_run(const CommonArgs& args, const wransim::RunOptions& opts) {
  auto parsed = load_scenario(args);
  if (!parsed) return kInvalid;
  try {
    const wransim::ResultBundle bundle = wransim::run_simulation(parsed->cfg, opts);
    wransim::write_run_outputs(args.out, bundle, parsed->cfg);
    std::cout << "wrote " << args.out << ": " << bundle.stats.qp_ticks << " quiet-period ticks, "
              << bundle.stats.sensing_events << " sensing events, " << bundle.stats.switches
              << " switches, " << bundle.stats.outages << " outages\n";
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

int cmd_sweep(const CommonArgs& args, const wransim::SweepSpec& overrides, bool var_set,
              bool values_set, int seeds_override) {
  auto parsed = load_scenario(args);
  if (!parsed) return kInvalid;
  wransim::SweepSpec spec;
  if (parsed->sweep) spec = *parsed->sweep;
  if (var_set) spec.variable = overrides.variable;
  if (values_set) spec.values = overrides.values;
  if (seeds_override > 0) spec.seeds_per_point = seeds_override;
  if (spec.values.empty()) {
    std::cerr << args.config << ": no sweep values; add a [sweep] section or pass --values\n";
    return kInvalid;
  }
  try {
    const wransim::SweepResult result = wransim::run_sweep(parsed->cfg, spec);
    wransim::write_sweep_csvs(args.out, result);
    std::cout << "wrote " << args.out << ": " << spec.values.size() << " points x "
              << spec.seeds_per_point << " seeds, " << result.rules.size() << " rules\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}

int cmd_validate(const CommonArgs& args) {
  auto parsed = load_scenario(args);
  if (!parsed) return kInvalid;
  const wransim::ScenarioConfig& cfg = parsed->cfg;
  std::cout << "ok: " << cfg.num_cells << " cells, " << cfg.num_channels << " channels, "
            << cfg.stations.size() + static_cast<size_t>(cfg.auto_stations) << " stations, "
            << cfg.horizon_superframes << " superframes"
            << (parsed->sweep ? ", sweep section present" : "") << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-cell cognitive radio network simulator"};
  app.require_subcommand(1);

  CommonArgs args;
  wransim::RunOptions run_opts;
  wransim::SweepSpec sweep_overrides;
  std::string sweep_variable;
  int sweep_seeds = 0;

  auto add_common = [&](CLI::App* sub, const char* default_out) {
    sub->add_option("-c,--config", args.config, "scenario file")->required();
    sub->add_option("-o,--out", args.out, "output directory")->default_val(default_out);
    sub->add_option("--seed", args.seed, "master seed override")
        ->each([&](const std::string&) { args.seed_set = true; });
    sub->add_option("--horizon", args.horizon, "superframe count override");
    sub->add_option("--rules", args.rules, "fusion rules to evaluate");
    sub->add_option("--active", args.active, "rule driving channel management");
  };

  CLI::App* run = app.add_subcommand("run", "run one scenario and write the report CSVs");
  add_common(run, "out");
  run->add_flag("--trace", run_opts.keep_trace, "keep the per-decision trace");
  run->add_flag("--truth", run_opts.keep_truth, "keep the ground-truth dump");
  run->add_option("--series", run_opts.series_every_superframes,
                  "superframes between time-series snapshots (0 disables)");

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep, "sweep-out");
  sweep->add_option("--variable", sweep_variable, "tx_snr_db, iar, iaf, or error_prob");
  sweep->add_option("--values", sweep_overrides.values, "sweep points");
  sweep->add_option("--seeds", sweep_seeds, "replicates per point");

  CLI::App* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("-c,--config", args.config, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  if (run->parsed()) return cmd_run(args, run_opts);
  if (sweep->parsed()) {
    bool var_set = false;
    if (!sweep_variable.empty()) {
      if (!wransim::sweep_variable_from_string(sweep_variable, sweep_overrides.variable)) {
        std::cerr << "unknown sweep variable '" << sweep_variable << "'\n";
        return kInvalid;
      }
      var_set = true;
    }
    return cmd_sweep(args, sweep_overrides, var_set, !sweep_overrides.values.empty(),
                     sweep_seeds);
  }
  return cmd_validate(args);
}
