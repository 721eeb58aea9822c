#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "wransim/chanmgmt.hpp"
#include "wransim/config.hpp"
#include "wransim/metrics.hpp"
#include "wransim/simulator.hpp"
#include "wransim/types.hpp"

namespace wransim {

// Library version stamped into the run metadata.
extern const char* const kVersion;

// "{}" or "{CH4 CH6}", ascending.
std::string render_channel_set(const std::set<ChannelId>& chans);

// Shortest round-trip decimal form; NaN renders as NA.
std::string csv_number(double v);

void write_trace_csv(const std::filesystem::path& file, const std::vector<TraceRow>& rows);
void write_truth_csv(const std::filesystem::path& file, const std::vector<TruthRow>& rows);
void write_lists_csv(const std::filesystem::path& file,
                     const std::vector<ChannelLists>& cells);
void write_transitions_csv(const std::filesystem::path& file,
                           const std::vector<ListTransition>& rows);
void write_switches_csv(const std::filesystem::path& file,
                        const std::vector<SwitchEvent>& rows);
// One file per metric: rows are cells, columns channels, NA where untracked.
void write_matrix_csvs(const std::filesystem::path& dir, FusionRule rule,
                       const PerfMatrix& m);
void write_summary_csv(const std::filesystem::path& file, const ResultBundle& bundle);
void write_series_csvs(const std::filesystem::path& dir, const ResultBundle& bundle);
void write_sensors_csv(const std::filesystem::path& file,
                       const std::vector<SensorSummary>& rows);

// Everything a run leaves behind: the per-rule matrices and summaries, the
// final channel lists, the transition and switch logs, optional trace and
// truth dumps, the resolved configuration, and a metadata file with the
// version and run counters. Creates `dir`; throws std::runtime_error when a
// file cannot be written.
void write_run_outputs(const std::filesystem::path& dir, const ResultBundle& bundle,
                       const ScenarioConfig& cfg);

}  // namespace wransim
