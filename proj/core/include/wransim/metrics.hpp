#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wransim/config.hpp"
#include "wransim/types.hpp"

namespace wransim {

struct EmptyWindow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WindowRates {
  double p_fa = 0.0;  // decided busy while truly idle
  double p_md = 0.0;  // decided idle while truly busy
  double p_sd = 0.0;  // decision matched the truth
};

// Sliding window of (decision, truth, database) triples for one cell and
// channel under one fusion rule. Counts are maintained incrementally; the
// stored triples remain available so the aggregates can be recomputed from
// scratch (used by the tests as an oracle).
class MetricsWindow {
 public:
  explicit MetricsWindow(int capacity);

  void push(int decision, int truth, int db);
  int size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::int64_t total_pushed() const { return pushed_; }

  // Windowed error rates. literal_false_alarm counts confirmed-busy slots
  // (decision * truth) instead of false alarms; the default partitions the
  // window, p_sd + p_fa + p_md = 1. Throws EmptyWindow.
  WindowRates rates(bool literal_false_alarm = false) const;

  // Busy/idle goodness of fit between decisions and truth. Counts mode
  // compares category counts, skipping categories the truth never filled;
  // literal mode averages (D - Z)^2 / Z over the busy-truth slots and is
  // undefined (nullopt) when the window saw no busy slot.
  std::optional<double> chi2(Chi2Mode mode) const;

  // Sample correlation of the binary decision and truth streams. When
  // either stream is constant: 1 if the streams are identical, else 0.
  double phi() const;

  struct Entry {
    std::int8_t d, z, r;
  };
  const std::vector<Entry>& raw() const { return buf_; }
  std::vector<Entry> ordered() const;  // oldest first

 private:
  std::vector<Entry> buf_;
  int head_ = 0;
  int count_ = 0;
  std::int64_t pushed_ = 0;
  // Running sums over the window.
  int sum_d_ = 0, sum_z_ = 0, sum_dz_ = 0, sum_match_ = 0;
};

struct PerfVector {
  double nwcf = 0.0;
  double p_sd = 0.0;
  double p_md = 0.0;
  double p_fa = 0.0;
  double chi2 = 0.0;
};

// Cell x channel matrix with untracked entries absent.
struct PerfMatrix {
  int cells = 0;
  int channels = 0;
  std::vector<std::optional<PerfVector>> entries;
  std::vector<std::int64_t> weights;  // effective sample counts

  PerfMatrix() = default;
  PerfMatrix(int m, int b) : cells(m), channels(b), entries(m * b), weights(m * b, 0) {}
  std::optional<PerfVector>& at(CellId j, ChannelId k) {
    return entries[j * channels + (k - 1)];
  }
  const std::optional<PerfVector>& at(CellId j, ChannelId k) const {
    return entries[j * channels + (k - 1)];
  }
  std::int64_t& weight(CellId j, ChannelId k) { return weights[j * channels + (k - 1)]; }
  std::int64_t weight(CellId j, ChannelId k) const { return weights[j * channels + (k - 1)]; }
};

struct AllUntracked : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weighted aggregate over the tracked entries of a matrix; weights are the
// effective sample counts. Throws AllUntracked when nothing was tracked.
PerfVector weighted_summary(const PerfMatrix& m);

struct CorrelationResult {
  std::vector<std::optional<double>> matrix;  // cell x channel, NA untracked
  double nwcf = 0.0;                          // sample-count weighted mean correlation
};

// Per-entry decision/truth correlations plus their network-wide weighted
// mean. Throws AllUntracked when every entry is untracked.
CorrelationResult correlation_and_nwcf(const std::vector<const MetricsWindow*>& windows,
                                       int cells, int channels);

struct ThresholdFlags {
  bool misdetection = false;
  bool false_alarm = false;
};

// Strict comparison against the detection requirement limits.
inline ThresholdFlags check_thresholds(const WindowRates& r, double limit_md,
                                       double limit_fa) {
  return {r.p_md > limit_md, r.p_fa > limit_fa};
}

}  // namespace wransim
