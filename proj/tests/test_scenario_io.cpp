#include <string>

#include "doctest.h"
#include "wransim/scenario_io.hpp"

using namespace wransim;

namespace {

const char* kMinimal = R"(
[scenario]
cells = 3
channels = 8
seed = 12
)";

std::string error_of(const char* text) {
  try {
    parse_config_text(text, "cfg");
  } catch (const ConfigParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("a minimal file parses onto the defaults") {
  const ParsedScenario p = parse_config_text(kMinimal, "cfg");
  CHECK(p.cfg.num_cells == 3);
  CHECK(p.cfg.num_channels == 8);
  CHECK(p.cfg.seed == 12);
  CHECK(p.cfg.cpes_per_cell == 10);          // untouched default
  CHECK(p.cfg.fusion.compare_rules.size() == 5);
  CHECK_FALSE(p.sweep.has_value());
  CHECK(p.cfg.validate().empty());
}

TEST_CASE("every section and repeatable key lands in the config") {
  const char* text = R"(
# comment and blank lines are ignored

[scenario]
cells = 2
channels = 6
seed = 99
cell_radius = 750
cpes_per_cell = 4
horizon_superframes = 50
station = 100 -200 3 1500 2.5
station = 0 0 5 900 0
disallowed = 0 2 4
disallowed = 1 6

[activity]
mean_on = 3
mean_off = 9
burstiness = 0.5
channel = 5 1 2 0

[radio]
tx_snr_db = 65
rate_formula = clt
sample_synthesis = per-sample
rayleigh_fading = false
report_loss_threshold_db = -4.5

[classifier]
labels = truth
rates = analytic
prior_override = 0.8

[fusion]
active_rule = voting
compare_rules = voting or
gamma = 0.5
zeta = 1.5
score_override = 4 0.2 0.9
voting_quorum = 2

[metrics]
window = 64
literal_false_alarm = true
chi2 = literal

[clock]
frame_seconds = 0.02
frames_per_superframe = 8
qp_every_frames = 4

[mgmt]
operating_per_cell = 2
md_flag_switch = false

[database]
error_prob = 0.25
staleness = 0.5

[faults]
byzantine_per_cell = 1
)";
  const ParsedScenario p = parse_config_text(text, "cfg");
  const ScenarioConfig& c = p.cfg;
  REQUIRE(c.stations.size() == 2);
  CHECK(c.stations[0].position.y == -200.0);
  CHECK(c.stations[0].channel == 3);
  CHECK(c.stations[0].tx_power == 2.5);
  CHECK(c.stations[1].tx_power == 0.0);
  REQUIRE(c.disallowed.size() == 2);
  CHECK(c.disallowed.at(0) == std::set<ChannelId>{2, 4});
  CHECK(c.disallowed.at(1) == std::set<ChannelId>{6});
  CHECK(c.activity.base.mean_off == 9.0);
  CHECK(c.activity.for_channel(5).mean_on == 1.0);
  CHECK(c.activity.for_channel(5).burstiness == 0.0);
  CHECK(c.activity.for_channel(4).mean_on == 3.0);
  CHECK(c.radio.rate_formula == RateFormula::Clt);
  CHECK(c.radio.sample_synthesis == SampleSynthesis::PerSample);
  CHECK_FALSE(c.radio.rayleigh_fading);
  CHECK(c.classifier.labels == LabelSource::Truth);
  CHECK(c.classifier.rates == RatesSource::Analytic);
  CHECK(c.classifier.prior_override == 0.8);
  CHECK(c.fusion.active_rule == FusionRule::Voting);
  // The first compare_rules line replaces the default set.
  REQUIRE(c.fusion.compare_rules.size() == 2);
  CHECK(c.fusion.compare_rules[0] == FusionRule::Voting);
  CHECK(c.fusion.compare_rules[1] == FusionRule::Or);
  CHECK(c.score_for(4) == std::pair<double, double>{0.2, 0.9});
  CHECK(c.score_for(3) == std::pair<double, double>{0.5, 1.5});
  CHECK(c.metrics.literal_false_alarm);
  CHECK(c.metrics.chi2 == Chi2Mode::Literal);
  CHECK(c.clock.qp_every_frames == 4);
  CHECK(c.mgmt.operating_per_cell == 2);
  CHECK_FALSE(c.mgmt.md_flag_switch);
  CHECK(c.database.error_prob == 0.25);
  CHECK(c.faults.byzantine_per_cell == 1);
}

TEST_CASE("parse errors carry the origin and line number") {
  CHECK(error_of("[scenario]\ncells = 1\nchannels = x\nseed = 1\n")
            .find("cfg:3:") != std::string::npos);
  CHECK(error_of("[radio]\nwat = 1\n").find("unknown key") != std::string::npos);
  CHECK(error_of("[nope]\n").find("unknown section") != std::string::npos);
  CHECK(error_of("cells = 1\n").find("before any section") != std::string::npos);
  CHECK(error_of("[scenario]\ncells\n").find("key = value") != std::string::npos);
  CHECK(error_of("[scenario]\nstation = 1 2 3\n").find("station") != std::string::npos);
  CHECK(error_of("[scenario]\ncells = 1\nchannels = 4\nseed = -2\n")
            .find("unsigned") != std::string::npos);
  CHECK(error_of("[radio]\nrayleigh_fading = maybe\n").find("true or false") !=
        std::string::npos);
  CHECK(error_of("[fusion]\nactive_rule = nand\n").find("unknown fusion rule") !=
        std::string::npos);
  // Missing requirements are reported even for otherwise clean files.
  CHECK(error_of("[scenario]\ncells = 1\nchannels = 4\n").find("seed") !=
        std::string::npos);
}

TEST_CASE("dump and parse are mutually inverse") {
  const ParsedScenario first = parse_config_text(kMinimal, "cfg");
  const std::string d1 = dump_config(first.cfg);
  const ParsedScenario second = parse_config_text(d1, "dump");
  const std::string d2 = dump_config(second.cfg);
  CHECK(d1 == d2);
  CHECK(second.cfg.num_cells == first.cfg.num_cells);
  CHECK(second.cfg.fusion.compare_rules == first.cfg.fusion.compare_rules);
}

TEST_CASE("dump round-trips a heavily customized scenario") {
  ScenarioConfig cfg;
  cfg.num_cells = 4;
  cfg.num_channels = 7;
  cfg.seed = 1234567890123ull;
  cfg.cell_radius = 333.25;
  cfg.stations.push_back({{-12.5, 7.75}, 2, 1000.0, 3.5});
  cfg.disallowed[2] = {1, 7};
  cfg.activity.overrides[3] = {0.125, 2.5, 0.75};
  cfg.radio.tx_snr_db = -12.5;
  cfg.radio.rate_formula = RateFormula::Clt;
  cfg.radio.report_loss_threshold_db = -6.25;
  cfg.classifier.labels = LabelSource::Truth;
  cfg.fusion.active_rule = FusionRule::McLdsAdaptive;
  cfg.fusion.compare_rules = {FusionRule::McLdsAdaptive, FusionRule::And};
  cfg.fusion.score_overrides[5] = {0.375, 2.125};
  cfg.fusion.normalize_report_gains = true;
  cfg.metrics.chi2 = Chi2Mode::Literal;
  cfg.mgmt.obs_period = 1.5;
  cfg.faults.byzantine_per_cell = 2;

  const std::string d = dump_config(cfg);
  const ParsedScenario back = parse_config_text(d, "dump");
  CHECK(dump_config(back.cfg) == d);
  CHECK(back.cfg.seed == cfg.seed);
  CHECK(back.cfg.stations.size() == 1);
  CHECK(back.cfg.stations[0].position == Vec2{-12.5, 7.75});
  CHECK(back.cfg.disallowed.at(2) == cfg.disallowed.at(2));
  CHECK(back.cfg.activity.overrides.at(3).mean_on == 0.125);
  CHECK(back.cfg.fusion.score_overrides.at(5) == std::pair<double, double>{0.375, 2.125});
  CHECK(back.cfg.fusion.normalize_report_gains);
  CHECK(back.cfg.radio.report_loss_threshold_db == -6.25);
}

TEST_CASE("sweep sections parse with overridable fields") {
  const char* text = R"(
[scenario]
cells = 1
channels = 4
seed = 5

[sweep]
variable = error_prob
values = 0 0.1 0.2
seeds_per_point = 3
rules = mc-lds or
iaf_fixed = 0.25
iar_fixed = 0.5
)";
  const ParsedScenario p = parse_config_text(text, "cfg");
  REQUIRE(p.sweep.has_value());
  CHECK(p.sweep->variable == SweepSpec::Variable::ErrorProb);
  CHECK(p.sweep->values == std::vector<double>{0.0, 0.1, 0.2});
  CHECK(p.sweep->seeds_per_point == 3);
  REQUIRE(p.sweep->rules.size() == 2);
  CHECK(p.sweep->rules[0] == FusionRule::McLds);
  CHECK(p.sweep->iaf_fixed == 0.25);
  CHECK(p.sweep->iar_fixed == 0.5);
}

TEST_CASE("enum spellings round-trip") {
  for (const char* name : {"tx_snr_db", "iar", "iaf", "error_prob"}) {
    SweepSpec::Variable v;
    REQUIRE(sweep_variable_from_string(name, v));
    CHECK(std::string(to_string(v)) == name);
  }
  SweepSpec::Variable v;
  CHECK_FALSE(sweep_variable_from_string("bogus", v));

  for (const char* name : {"mc-lds", "mc-lds-adaptive", "and", "or", "voting"}) {
    FusionRule r;
    REQUIRE(fusion_rule_from_string(name, r));
    CHECK(std::string(to_string(r)) == name);
  }
  FusionRule r;
  CHECK_FALSE(fusion_rule_from_string("nand", r));
}

TEST_CASE("validation rejects inconsistent scenarios with named fields") {
  ScenarioConfig cfg = parse_config_text(kMinimal, "cfg").cfg;
  cfg.fusion.gamma = 2.0;
  cfg.fusion.zeta = 1.0;
  cfg.num_cells = 0;
  const auto errors = cfg.validate();
  REQUIRE_FALSE(errors.empty());
  bool saw_cells = false, saw_scores = false;
  for (const std::string& e : errors) {
    if (e.find("cells") != std::string::npos) saw_cells = true;
    if (e.find("gamma") != std::string::npos) saw_scores = true;
  }
  CHECK(saw_cells);
  CHECK(saw_scores);
}
