#include "wransim/scenario_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <sstream>
#include <vector>

namespace wransim {

namespace {

struct Cursor {
  const std::string& origin;
  int line = 0;
};

[[noreturn]] void fail(const Cursor& c, const std::string& msg) {
  throw ConfigParseError(fmt::format("{}:{}: {}", c.origin, c.line, msg));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> tokens(const std::string& value) {
  std::istringstream in(value);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double to_double(const Cursor& c, const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty())
    fail(c, fmt::format("expected a number, got '{}'", tok));
  return v;
}

long long to_int(const Cursor& c, const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end != begin + tok.size() || tok.empty())
    fail(c, fmt::format("expected an integer, got '{}'", tok));
  return v;
}

std::uint64_t to_u64(const Cursor& c, const std::string& tok) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end != begin + tok.size() || tok.empty() || tok.front() == '-')
    fail(c, fmt::format("expected an unsigned integer, got '{}'", tok));
  return v;
}

bool to_bool(const Cursor& c, const std::string& tok) {
  if (tok == "true" || tok == "1") return true;
  if (tok == "false" || tok == "0") return false;
  fail(c, fmt::format("expected true or false, got '{}'", tok));
}

FusionRule to_rule(const Cursor& c, const std::string& tok) {
  FusionRule rule;
  if (!fusion_rule_from_string(tok, rule))
    fail(c, fmt::format("unknown fusion rule '{}' (mc-lds, mc-lds-adaptive, and, or, voting)",
                        tok));
  return rule;
}

std::string fmt(double v) { return fmt::format("{}", v); }
const char* fmt(bool v) { return v ? "true" : "false"; }

}  // namespace

const char* to_string(SweepSpec::Variable v) {
  switch (v) {
    case SweepSpec::Variable::TxSnrDb: return "tx_snr_db";
    case SweepSpec::Variable::Iar: return "iar";
    case SweepSpec::Variable::Iaf: return "iaf";
    case SweepSpec::Variable::ErrorProb: return "error_prob";
  }
  return "?";
}

bool sweep_variable_from_string(const std::string& name, SweepSpec::Variable& out) {
  if (name == "tx_snr_db") out = SweepSpec::Variable::TxSnrDb;
  else if (name == "iar") out = SweepSpec::Variable::Iar;
  else if (name == "iaf") out = SweepSpec::Variable::Iaf;
  else if (name == "error_prob") out = SweepSpec::Variable::ErrorProb;
  else return false;
  return true;
}

ParsedScenario parse_config_text(std::string_view text, const std::string& origin) {
  ParsedScenario out;
  ScenarioConfig& cfg = out.cfg;
  Cursor cur{origin, 0};
  std::string section;
  bool saw_cells = false, saw_channels = false, saw_seed = false;
  bool compare_rules_set = false;

  std::istringstream stream{std::string(text)};
  std::string raw;
  while (std::getline(stream, raw)) {
    ++cur.line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(cur, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const char* known[] = {"scenario", "activity", "radio",   "classifier",
                                    "fusion",   "metrics",  "clock",   "mgmt",
                                    "database", "faults",   "sweep"};
      if (std::find_if(std::begin(known), std::end(known),
                       [&](const char* s) { return section == s; }) == std::end(known))
        fail(cur, fmt::format("unknown section [{}]", section));
      if (section == "sweep" && !out.sweep) out.sweep.emplace();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(cur, "expected 'key = value'");
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) fail(cur, "empty key");
    if (section.empty()) fail(cur, fmt::format("key '{}' before any section", key));
    const auto toks = tokens(value);
    auto single = [&]() -> const std::string& {
      if (toks.size() != 1)
        fail(cur, fmt::format("key '{}' takes exactly one value", key));
      return toks[0];
    };

    if (section == "scenario") {
      if (key == "cells") { cfg.num_cells = static_cast<int>(to_int(cur, single())); saw_cells = true; }
      else if (key == "channels") { cfg.num_channels = static_cast<int>(to_int(cur, single())); saw_channels = true; }
      else if (key == "cell_radius") cfg.cell_radius = to_double(cur, single());
      else if (key == "cpes_per_cell") cfg.cpes_per_cell = static_cast<int>(to_int(cur, single()));
      else if (key == "seed") { cfg.seed = to_u64(cur, single()); saw_seed = true; }
      else if (key == "horizon_superframes") cfg.horizon_superframes = to_int(cur, single());
      else if (key == "auto_stations") cfg.auto_stations = static_cast<int>(to_int(cur, single()));
      else if (key == "auto_coverage_radius") cfg.auto_coverage_radius = to_double(cur, single());
      else if (key == "station") {
        if (toks.size() != 5)
          fail(cur, "station takes: x y channel coverage_radius tx_power");
        IncumbentStation st;
        st.position = {to_double(cur, toks[0]), to_double(cur, toks[1])};
        st.channel = static_cast<ChannelId>(to_int(cur, toks[2]));
        st.coverage_radius = to_double(cur, toks[3]);
        st.tx_power = to_double(cur, toks[4]);
        cfg.stations.push_back(st);
      } else if (key == "disallowed") {
        if (toks.size() < 2) fail(cur, "disallowed takes: cell channel [channel ...]");
        const CellId cell = static_cast<CellId>(to_int(cur, toks[0]));
        for (size_t i = 1; i < toks.size(); ++i)
          cfg.disallowed[cell].insert(static_cast<ChannelId>(to_int(cur, toks[i])));
      } else fail(cur, fmt::format("unknown key '{}' in [scenario]", key));
    } else if (section == "activity") {
      if (key == "mean_on") cfg.activity.base.mean_on = to_double(cur, single());
      else if (key == "mean_off") cfg.activity.base.mean_off = to_double(cur, single());
      else if (key == "burstiness") cfg.activity.base.burstiness = to_double(cur, single());
      else if (key == "channel") {
        if (toks.size() != 4) fail(cur, "channel takes: channel mean_on mean_off burstiness");
        const ChannelId k = static_cast<ChannelId>(to_int(cur, toks[0]));
        cfg.activity.overrides[k] = {to_double(cur, toks[1]), to_double(cur, toks[2]),
                                     to_double(cur, toks[3])};
      } else fail(cur, fmt::format("unknown key '{}' in [activity]", key));
    } else if (section == "radio") {
      if (key == "noise_power") cfg.radio.noise_power = to_double(cur, single());
      else if (key == "path_loss_exponent") cfg.radio.path_loss_exponent = to_double(cur, single());
      else if (key == "path_loss_ref_distance") cfg.radio.path_loss_ref_distance = to_double(cur, single());
      else if (key == "shadowing_sigma_db") cfg.radio.shadowing_sigma_db = to_double(cur, single());
      else if (key == "shadowing_corr_distance") cfg.radio.shadowing_corr_distance = to_double(cur, single());
      else if (key == "slow_fading_hold_frames") cfg.radio.slow_fading_hold_frames = static_cast<int>(to_int(cur, single()));
      else if (key == "rayleigh_fading") cfg.radio.rayleigh_fading = to_bool(cur, single());
      else if (key == "samples_per_sensing") cfg.radio.samples_per_sensing = static_cast<int>(to_int(cur, single()));
      else if (key == "threshold_factor") cfg.radio.threshold_factor = to_double(cur, single());
      else if (key == "tx_snr_db") cfg.radio.tx_snr_db = to_double(cur, single());
      else if (key == "rate_formula") {
        const std::string& v = single();
        if (v == "approx") cfg.radio.rate_formula = RateFormula::Approx;
        else if (v == "clt") cfg.radio.rate_formula = RateFormula::Clt;
        else fail(cur, fmt::format("rate_formula must be approx or clt, got '{}'", v));
      } else if (key == "sample_synthesis") {
        const std::string& v = single();
        if (v == "gamma") cfg.radio.sample_synthesis = SampleSynthesis::Gamma;
        else if (v == "per-sample") cfg.radio.sample_synthesis = SampleSynthesis::PerSample;
        else fail(cur, fmt::format("sample_synthesis must be gamma or per-sample, got '{}'", v));
      }
      else if (key == "report_tx_power") cfg.radio.report_tx_power = to_double(cur, single());
      else if (key == "report_loss_threshold_db") cfg.radio.report_loss_threshold_db = to_double(cur, single());
      else fail(cur, fmt::format("unknown key '{}' in [radio]", key));
    } else if (section == "classifier") {
      if (key == "train_window") cfg.classifier.train_window = static_cast<int>(to_int(cur, single()));
      else if (key == "test_window") cfg.classifier.test_window = static_cast<int>(to_int(cur, single()));
      else if (key == "warmup_qps") cfg.classifier.warmup_qps = static_cast<int>(to_int(cur, single()));
      else if (key == "refit_period") cfg.classifier.refit_period = static_cast<int>(to_int(cur, single()));
      else if (key == "refit_error_factor") cfg.classifier.refit_error_factor = to_double(cur, single());
      else if (key == "ridge") cfg.classifier.ridge = to_double(cur, single());
      else if (key == "tol") cfg.classifier.tol = to_double(cur, single());
      else if (key == "max_iter") cfg.classifier.max_iter = static_cast<int>(to_int(cur, single()));
      else if (key == "labels") {
        const std::string& v = single();
        if (v == "database") cfg.classifier.labels = LabelSource::Database;
        else if (v == "truth") cfg.classifier.labels = LabelSource::Truth;
        else fail(cur, fmt::format("labels must be database or truth, got '{}'", v));
      } else if (key == "rates") {
        const std::string& v = single();
        if (v == "empirical") cfg.classifier.rates = RatesSource::Empirical;
        else if (v == "analytic") cfg.classifier.rates = RatesSource::Analytic;
        else fail(cur, fmt::format("rates must be empirical or analytic, got '{}'", v));
      }
      else if (key == "prior_override") cfg.classifier.prior_override = to_double(cur, single());
      else if (key == "prior_window") cfg.classifier.prior_window = static_cast<int>(to_int(cur, single()));
      else fail(cur, fmt::format("unknown key '{}' in [classifier]", key));
    } else if (section == "fusion") {
      if (key == "active_rule") cfg.fusion.active_rule = to_rule(cur, single());
      else if (key == "compare_rules") {
        if (toks.empty()) fail(cur, "compare_rules takes at least one rule");
        if (!compare_rules_set) {
          cfg.fusion.compare_rules.clear();
          compare_rules_set = true;
        }
        for (const std::string& tok : toks)
          cfg.fusion.compare_rules.push_back(to_rule(cur, tok));
      }
      else if (key == "gamma") cfg.fusion.gamma = to_double(cur, single());
      else if (key == "zeta") cfg.fusion.zeta = to_double(cur, single());
      else if (key == "score_override") {
        if (toks.size() != 3) fail(cur, "score_override takes: channel gamma zeta");
        cfg.fusion.score_overrides[static_cast<ChannelId>(to_int(cur, toks[0]))] = {
            to_double(cur, toks[1]), to_double(cur, toks[2])};
      }
      else if (key == "alpha") cfg.fusion.alpha = to_double(cur, single());
      else if (key == "historic_count") cfg.fusion.historic_count = static_cast<int>(to_int(cur, single()));
      else if (key == "adapt_a") cfg.fusion.adapt.a = to_double(cur, single());
      else if (key == "adapt_b") cfg.fusion.adapt.b = to_double(cur, single());
      else if (key == "adapt_c") cfg.fusion.adapt.c = to_double(cur, single());
      else if (key == "adapt_d") cfg.fusion.adapt.d = to_double(cur, single());
      else if (key == "adapt_period") cfg.fusion.adapt_period = static_cast<int>(to_int(cur, single()));
      else if (key == "normalize_report_gains") cfg.fusion.normalize_report_gains = to_bool(cur, single());
      else if (key == "voting_quorum") cfg.fusion.voting_quorum = static_cast<int>(to_int(cur, single()));
      else fail(cur, fmt::format("unknown key '{}' in [fusion]", key));
    } else if (section == "metrics") {
      if (key == "window") cfg.metrics.window = static_cast<int>(to_int(cur, single()));
      else if (key == "limit_md") cfg.metrics.limit_md = to_double(cur, single());
      else if (key == "limit_fa") cfg.metrics.limit_fa = to_double(cur, single());
      else if (key == "literal_false_alarm") cfg.metrics.literal_false_alarm = to_bool(cur, single());
      else if (key == "chi2") {
        const std::string& v = single();
        if (v == "counts") cfg.metrics.chi2 = Chi2Mode::Counts;
        else if (v == "literal") cfg.metrics.chi2 = Chi2Mode::Literal;
        else fail(cur, fmt::format("chi2 must be counts or literal, got '{}'", v));
      } else fail(cur, fmt::format("unknown key '{}' in [metrics]", key));
    } else if (section == "clock") {
      if (key == "frame_seconds") cfg.clock.frame_seconds = to_double(cur, single());
      else if (key == "frames_per_superframe") cfg.clock.frames_per_superframe = static_cast<int>(to_int(cur, single()));
      else if (key == "qp_every_frames") cfg.clock.qp_every_frames = static_cast<int>(to_int(cur, single()));
      else fail(cur, fmt::format("unknown key '{}' in [clock]", key));
    } else if (section == "mgmt") {
      if (key == "obs_period") cfg.mgmt.obs_period = to_double(cur, single());
      else if (key == "promotion_idle") cfg.mgmt.promotion_idle = to_double(cur, single());
      else if (key == "max_sense_gap") cfg.mgmt.max_sense_gap = to_double(cur, single());
      else if (key == "channel_move_time") cfg.mgmt.channel_move_time = to_double(cur, single());
      else if (key == "operating_per_cell") cfg.mgmt.operating_per_cell = static_cast<int>(to_int(cur, single()));
      else if (key == "initial_backup_per_cell") cfg.mgmt.initial_backup_per_cell = static_cast<int>(to_int(cur, single()));
      else if (key == "obs_fraction") cfg.mgmt.obs_fraction = to_double(cur, single());
      else if (key == "md_flag_switch") cfg.mgmt.md_flag_switch = to_bool(cur, single());
      else if (key == "escalation") cfg.mgmt.escalation = to_bool(cur, single());
      else if (key == "flag_cooldown_qps") cfg.mgmt.flag_cooldown_qps = static_cast<int>(to_int(cur, single()));
      else fail(cur, fmt::format("unknown key '{}' in [mgmt]", key));
    } else if (section == "database") {
      if (key == "error_prob") cfg.database.error_prob = to_double(cur, single());
      else if (key == "staleness") cfg.database.staleness = to_double(cur, single());
      else fail(cur, fmt::format("unknown key '{}' in [database]", key));
    } else if (section == "faults") {
      if (key == "byzantine_per_cell") cfg.faults.byzantine_per_cell = static_cast<int>(to_int(cur, single()));
      else fail(cur, fmt::format("unknown key '{}' in [faults]", key));
    } else if (section == "sweep") {
      SweepSpec& sw = *out.sweep;
      if (key == "variable") {
        if (!sweep_variable_from_string(single(), sw.variable))
          fail(cur, fmt::format(
                        "variable must be tx_snr_db, iar, iaf, or error_prob, got '{}'",
                        toks[0]));
      } else if (key == "values") {
        for (const std::string& tok : toks) sw.values.push_back(to_double(cur, tok));
      }
      else if (key == "seeds_per_point") sw.seeds_per_point = static_cast<int>(to_int(cur, single()));
      else if (key == "rules") {
        for (const std::string& tok : toks) sw.rules.push_back(to_rule(cur, tok));
      }
      else if (key == "iaf_fixed") sw.iaf_fixed = to_double(cur, single());
      else if (key == "iar_fixed") sw.iar_fixed = to_double(cur, single());
      else fail(cur, fmt::format("unknown key '{}' in [sweep]", key));
    }
  }

  Cursor end{origin, cur.line};
  if (!saw_cells) fail(end, "missing required key 'cells' in [scenario]");
  if (!saw_channels) fail(end, "missing required key 'channels' in [scenario]");
  if (!saw_seed) fail(end, "missing required key 'seed' in [scenario]");
  return out;
}

ParsedScenario parse_config_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigParseError(fmt::format("cannot read {}", file.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), file.string());
}

std::string dump_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "cells = " << cfg.num_cells << '\n';
  out << "channels = " << cfg.num_channels << '\n';
  out << "cell_radius = " << fmt(cfg.cell_radius) << '\n';
  out << "cpes_per_cell = " << cfg.cpes_per_cell << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "horizon_superframes = " << cfg.horizon_superframes << '\n';
  out << "auto_stations = " << cfg.auto_stations << '\n';
  out << "auto_coverage_radius = " << fmt(cfg.auto_coverage_radius) << '\n';
  for (const IncumbentStation& st : cfg.stations)
    out << "station = " << fmt(st.position.x) << ' ' << fmt(st.position.y) << ' ' << st.channel
        << ' ' << fmt(st.coverage_radius) << ' ' << fmt(st.tx_power) << '\n';
  for (const auto& [cell, chans] : cfg.disallowed) {
    out << "disallowed = " << cell;
    for (ChannelId ch : chans) out << ' ' << ch;
    out << '\n';
  }

  out << "\n[activity]\n";
  out << "mean_on = " << fmt(cfg.activity.base.mean_on) << '\n';
  out << "mean_off = " << fmt(cfg.activity.base.mean_off) << '\n';
  out << "burstiness = " << fmt(cfg.activity.base.burstiness) << '\n';
  for (const auto& [k, act] : cfg.activity.overrides)
    out << "channel = " << k << ' ' << fmt(act.mean_on) << ' ' << fmt(act.mean_off) << ' '
        << fmt(act.burstiness) << '\n';

  out << "\n[radio]\n";
  out << "noise_power = " << fmt(cfg.radio.noise_power) << '\n';
  out << "path_loss_exponent = " << fmt(cfg.radio.path_loss_exponent) << '\n';
  out << "path_loss_ref_distance = " << fmt(cfg.radio.path_loss_ref_distance) << '\n';
  out << "shadowing_sigma_db = " << fmt(cfg.radio.shadowing_sigma_db) << '\n';
  out << "shadowing_corr_distance = " << fmt(cfg.radio.shadowing_corr_distance) << '\n';
  out << "slow_fading_hold_frames = " << cfg.radio.slow_fading_hold_frames << '\n';
  out << "rayleigh_fading = " << fmt(cfg.radio.rayleigh_fading) << '\n';
  out << "samples_per_sensing = " << cfg.radio.samples_per_sensing << '\n';
  out << "threshold_factor = " << fmt(cfg.radio.threshold_factor) << '\n';
  out << "tx_snr_db = " << fmt(cfg.radio.tx_snr_db) << '\n';
  out << "rate_formula = "
      << (cfg.radio.rate_formula == RateFormula::Approx ? "approx" : "clt") << '\n';
  out << "sample_synthesis = "
      << (cfg.radio.sample_synthesis == SampleSynthesis::Gamma ? "gamma" : "per-sample")
      << '\n';
  out << "report_tx_power = " << fmt(cfg.radio.report_tx_power) << '\n';
  out << "report_loss_threshold_db = " << fmt(cfg.radio.report_loss_threshold_db) << '\n';

  out << "\n[classifier]\n";
  out << "train_window = " << cfg.classifier.train_window << '\n';
  out << "test_window = " << cfg.classifier.test_window << '\n';
  out << "warmup_qps = " << cfg.classifier.warmup_qps << '\n';
  out << "refit_period = " << cfg.classifier.refit_period << '\n';
  out << "refit_error_factor = " << fmt(cfg.classifier.refit_error_factor) << '\n';
  out << "ridge = " << fmt(cfg.classifier.ridge) << '\n';
  out << "tol = " << fmt(cfg.classifier.tol) << '\n';
  out << "max_iter = " << cfg.classifier.max_iter << '\n';
  out << "labels = " << (cfg.classifier.labels == LabelSource::Database ? "database" : "truth")
      << '\n';
  out << "rates = "
      << (cfg.classifier.rates == RatesSource::Empirical ? "empirical" : "analytic") << '\n';
  out << "prior_override = " << fmt(cfg.classifier.prior_override) << '\n';
  out << "prior_window = " << cfg.classifier.prior_window << '\n';

  out << "\n[fusion]\n";
  out << "active_rule = " << to_string(cfg.fusion.active_rule) << '\n';
  out << "compare_rules =";
  for (FusionRule r : cfg.fusion.compare_rules) out << ' ' << to_string(r);
  out << '\n';
  out << "gamma = " << fmt(cfg.fusion.gamma) << '\n';
  out << "zeta = " << fmt(cfg.fusion.zeta) << '\n';
  for (const auto& [k, gz] : cfg.fusion.score_overrides)
    out << "score_override = " << k << ' ' << fmt(gz.first) << ' ' << fmt(gz.second) << '\n';
  out << "alpha = " << fmt(cfg.fusion.alpha) << '\n';
  out << "historic_count = " << cfg.fusion.historic_count << '\n';
  out << "adapt_a = " << fmt(cfg.fusion.adapt.a) << '\n';
  out << "adapt_b = " << fmt(cfg.fusion.adapt.b) << '\n';
  out << "adapt_c = " << fmt(cfg.fusion.adapt.c) << '\n';
  out << "adapt_d = " << fmt(cfg.fusion.adapt.d) << '\n';
  out << "adapt_period = " << cfg.fusion.adapt_period << '\n';
  out << "normalize_report_gains = " << fmt(cfg.fusion.normalize_report_gains) << '\n';
  out << "voting_quorum = " << cfg.fusion.voting_quorum << '\n';

  out << "\n[metrics]\n";
  out << "window = " << cfg.metrics.window << '\n';
  out << "limit_md = " << fmt(cfg.metrics.limit_md) << '\n';
  out << "limit_fa = " << fmt(cfg.metrics.limit_fa) << '\n';
  out << "literal_false_alarm = " << fmt(cfg.metrics.literal_false_alarm) << '\n';
  out << "chi2 = " << (cfg.metrics.chi2 == Chi2Mode::Counts ? "counts" : "literal") << '\n';

  out << "\n[clock]\n";
  out << "frame_seconds = " << fmt(cfg.clock.frame_seconds) << '\n';
  out << "frames_per_superframe = " << cfg.clock.frames_per_superframe << '\n';
  out << "qp_every_frames = " << cfg.clock.qp_every_frames << '\n';

  out << "\n[mgmt]\n";
  out << "obs_period = " << fmt(cfg.mgmt.obs_period) << '\n';
  out << "promotion_idle = " << fmt(cfg.mgmt.promotion_idle) << '\n';
  out << "max_sense_gap = " << fmt(cfg.mgmt.max_sense_gap) << '\n';
  out << "channel_move_time = " << fmt(cfg.mgmt.channel_move_time) << '\n';
  out << "operating_per_cell = " << cfg.mgmt.operating_per_cell << '\n';
  out << "initial_backup_per_cell = " << cfg.mgmt.initial_backup_per_cell << '\n';
  out << "obs_fraction = " << fmt(cfg.mgmt.obs_fraction) << '\n';
  out << "md_flag_switch = " << fmt(cfg.mgmt.md_flag_switch) << '\n';
  out << "escalation = " << fmt(cfg.mgmt.escalation) << '\n';
  out << "flag_cooldown_qps = " << cfg.mgmt.flag_cooldown_qps << '\n';

  out << "\n[database]\n";
  out << "error_prob = " << fmt(cfg.database.error_prob) << '\n';
  out << "staleness = " << fmt(cfg.database.staleness) << '\n';

  out << "\n[faults]\n";
  out << "byzantine_per_cell = " << cfg.faults.byzantine_per_cell << '\n';
  return out.str();
}

}  // namespace wransim
