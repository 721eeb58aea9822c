#include "wransim/report.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>

#include "wransim/scenario_io.hpp"

namespace wransim {

const char* const kVersion = "0.1.0";

namespace {

std::ofstream open_or_throw(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", file.string()));
  return out;
}

}  // namespace

std::string render_channel_set(const std::set<ChannelId>& chans) {
  std::string out = "{";
  for (ChannelId ch : chans) {
    if (out.size() > 1) out += ' ';
    out += fmt::format("CH{}", ch);
  }
  out += '}';
  return out;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "NA";
  return fmt::format("{}", v);
}

void write_trace_csv(const std::filesystem::path& file, const std::vector<TraceRow>& rows) {
  auto out = open_or_throw(file);
  out << "t,cell,channel,rule,decision,truth,db,statistic\n";
  for (const TraceRow& r : rows)
    out << fmt::format("{},{},{},{},{},{},{},{}\n", r.t, r.cell, r.ch, to_string(r.rule),
                       r.decision, r.truth, r.db, csv_number(r.statistic));
}

void write_truth_csv(const std::filesystem::path& file, const std::vector<TruthRow>& rows) {
  auto out = open_or_throw(file);
  out << "t,cell,channel,truth\n";
  for (const TruthRow& r : rows)
    out << fmt::format("{},{},{},{}\n", r.t, r.cell, r.ch, r.truth);
}

void write_lists_csv(const std::filesystem::path& file,
                     const std::vector<ChannelLists>& cells) {
  auto out = open_or_throw(file);
  out << "cell,ocl,dcl,bcl,pcl,ccl\n";
  for (CellId j = 0; j < static_cast<CellId>(cells.size()); ++j) {
    const ChannelLists& l = cells[j];
    out << fmt::format("{},{},{},{},{},{}\n", j, render_channel_set(l.ocl),
                       render_channel_set(l.dcl), render_channel_set(l.bcl),
                       render_channel_set(l.pcl), render_channel_set(l.ccl));
  }
}

void write_transitions_csv(const std::filesystem::path& file,
                           const std::vector<ListTransition>& rows) {
  auto out = open_or_throw(file);
  out << "time,cell,channel,from,to,initial\n";
  for (const ListTransition& t : rows)
    out << fmt::format("{},{},{},{},{},{}\n", csv_number(t.time), t.cell, t.ch,
                       to_string(t.from), to_string(t.to), t.initial ? 1 : 0);
}

void write_switches_csv(const std::filesystem::path& file,
                        const std::vector<SwitchEvent>& rows) {
  auto out = open_or_throw(file);
  out << "cell,from,to,started,deadline\n";
  for (const SwitchEvent& s : rows)
    out << fmt::format("{},{},{},{},{}\n", s.cell, s.from, s.to, csv_number(s.started),
                       csv_number(s.deadline));
}

void write_matrix_csvs(const std::filesystem::path& dir, FusionRule rule,
                       const PerfMatrix& m) {
  const std::pair<const char*, double PerfVector::*> metrics[] = {
      {"phi", &PerfVector::nwcf}, {"p_sd", &PerfVector::p_sd},
      {"p_md", &PerfVector::p_md}, {"p_fa", &PerfVector::p_fa},
      {"chi2", &PerfVector::chi2}};
  for (const auto& [name, field] : metrics) {
    auto out = open_or_throw(dir / fmt::format("{}_{}.csv", name, to_string(rule)));
    out << "cell";
    for (ChannelId k = 1; k <= m.channels; ++k) out << fmt::format(",CH{}", k);
    out << '\n';
    for (CellId j = 0; j < m.cells; ++j) {
      out << j;
      for (ChannelId k = 1; k <= m.channels; ++k) {
        const auto& entry = m.at(j, k);
        out << ',' << (entry ? csv_number((*entry).*field) : "NA");
      }
      out << '\n';
    }
  }
}

void write_summary_csv(const std::filesystem::path& file, const ResultBundle& bundle) {
  auto out = open_or_throw(file);
  out << "rule,nwcf,p_sd,p_md,p_fa,chi2\n";
  for (FusionRule rule : bundle.rules) {
    auto it = bundle.perf.find(rule);
    if (it == bundle.perf.end()) continue;
    try {
      const PerfVector s = weighted_summary(it->second);
      out << fmt::format("{},{},{},{},{},{}\n", to_string(rule), csv_number(s.nwcf),
                         csv_number(s.p_sd), csv_number(s.p_md), csv_number(s.p_fa),
                         csv_number(s.chi2));
    } catch (const AllUntracked&) {
      out << fmt::format("{},NA,NA,NA,NA,NA\n", to_string(rule));
    }
  }
}

void write_series_csvs(const std::filesystem::path& dir, const ResultBundle& bundle) {
  for (const auto& [rule, points] : bundle.series) {
    if (points.empty()) continue;
    auto out = open_or_throw(dir / fmt::format("series_{}.csv", to_string(rule)));
    out << "time,nwcf,p_sd,p_md,p_fa,chi2\n";
    for (const RuleSeriesPoint& p : points)
      out << fmt::format("{},{},{},{},{},{}\n", csv_number(p.time), csv_number(p.summary.nwcf),
                         csv_number(p.summary.p_sd), csv_number(p.summary.p_md),
                         csv_number(p.summary.p_fa), csv_number(p.summary.chi2));
  }
}

void write_sensors_csv(const std::filesystem::path& file,
                       const std::vector<SensorSummary>& rows) {
  auto out = open_or_throw(file);
  out << "cell,channel,sensor,scored,final_confidence,first_negative\n";
  for (const SensorSummary& s : rows)
    out << fmt::format("{},{},{},{},{},{}\n", s.cell, s.ch, s.sensor, s.scored,
                       csv_number(s.final_w), s.first_negative);
}

void write_run_outputs(const std::filesystem::path& dir, const ResultBundle& bundle,
                       const ScenarioConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec && !std::filesystem::is_directory(dir))
    throw std::runtime_error(fmt::format("cannot create {}: {}", dir.string(), ec.message()));

  for (FusionRule rule : bundle.rules) {
    auto it = bundle.perf.find(rule);
    if (it != bundle.perf.end()) write_matrix_csvs(dir, rule, it->second);
  }
  write_summary_csv(dir / "summary.csv", bundle);
  write_series_csvs(dir, bundle);
  write_lists_csv(dir / "lists.csv", bundle.final_lists);
  write_transitions_csv(dir / "transitions.csv", bundle.transitions);
  write_switches_csv(dir / "switches.csv", bundle.switches);
  write_sensors_csv(dir / "sensors.csv", bundle.sensors);
  if (!bundle.trace.empty()) write_trace_csv(dir / "trace.csv", bundle.trace);
  if (!bundle.truth.empty()) write_truth_csv(dir / "truth.csv", bundle.truth);

  {
    auto out = open_or_throw(dir / "resolved.cfg");
    out << dump_config(cfg);
  }
  {
    auto out = open_or_throw(dir / "run_info.txt");
    out << fmt::format("version {}\n", kVersion);
    const RunStats& s = bundle.stats;
    out << fmt::format("qp_ticks {}\n", s.qp_ticks);
    out << fmt::format("sensing_events {}\n", s.sensing_events);
    out << fmt::format("inter_frame_qps {}\n", s.inter_frame_qps);
    out << fmt::format("refits {}\n", s.refits);
    out << fmt::format("switches {}\n", s.switches);
    out << fmt::format("outages {}\n", s.outages);
    out << fmt::format("reports_total {}\n", s.reports_total);
    out << fmt::format("reports_lost {}\n", s.reports_lost);
    out << fmt::format("list_violations {}\n", s.list_violations);
    out << fmt::format("sensing_checksum {:016x}\n", s.sensing_checksum);
    out << fmt::format("truth_checksum {:016x}\n", s.truth_checksum);
  }
}

}  // namespace wransim
