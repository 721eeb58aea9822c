#include "wransim/metrics.hpp"

#include <cmath>

namespace wransim {

MetricsWindow::MetricsWindow(int capacity) : buf_(std::max(1, capacity)) {}

void MetricsWindow::push(int decision, int truth, int db) {
  if (count_ == static_cast<int>(buf_.size())) {
    const Entry& old = buf_[head_];
    sum_d_ -= old.d;
    sum_z_ -= old.z;
    sum_dz_ -= old.d * old.z;
    sum_match_ -= (old.d == old.z);
    --count_;
  }
  buf_[head_] = {static_cast<std::int8_t>(decision), static_cast<std::int8_t>(truth),
                 static_cast<std::int8_t>(db)};
  head_ = (head_ + 1) % static_cast<int>(buf_.size());
  ++count_;
  ++pushed_;
  sum_d_ += decision;
  sum_z_ += truth;
  sum_dz_ += decision * truth;
  sum_match_ += (decision == truth);
}

std::vector<MetricsWindow::Entry> MetricsWindow::ordered() const {
  std::vector<Entry> out;
  out.reserve(count_);
  const int n = static_cast<int>(buf_.size());
  for (int i = 0; i < count_; ++i) out.push_back(buf_[((head_ - count_ + i) % n + n) % n]);
  return out;
}

WindowRates MetricsWindow::rates(bool literal_false_alarm) const {
  if (count_ == 0) throw EmptyWindow("rates: no samples in the window");
  const double n = count_;
  WindowRates r;
  r.p_md = (sum_z_ - sum_dz_) / n;  // truth busy, decided idle
  r.p_sd = sum_match_ / n;
  r.p_fa = literal_false_alarm ? sum_dz_ / n : (sum_d_ - sum_dz_) / n;
  return r;
}

std::optional<double> MetricsWindow::chi2(Chi2Mode mode) const {
  if (count_ == 0) return std::nullopt;
  if (mode == Chi2Mode::Literal) {
    // Sum of (D - Z)^2 / Z over slots where Z = 1: counts the misses.
    if (sum_z_ == 0) return std::nullopt;
    return static_cast<double>(sum_z_ - sum_dz_);
  }
  // Busy/idle category counts, decisions observed versus truth expected.
  double stat = 0.0;
  const double e_busy = sum_z_, e_idle = count_ - sum_z_;
  const double o_busy = sum_d_, o_idle = count_ - sum_d_;
  if (e_busy > 0.0) stat += (o_busy - e_busy) * (o_busy - e_busy) / e_busy;
  if (e_idle > 0.0) stat += (o_idle - e_idle) * (o_idle - e_idle) / e_idle;
  return stat;
}

double MetricsWindow::phi() const {
  if (count_ == 0) throw EmptyWindow("phi: no samples in the window");
  const double n = count_;
  const double var_d = sum_d_ * (n - sum_d_);
  const double var_z = sum_z_ * (n - sum_z_);
  if (var_d == 0.0 || var_z == 0.0) return sum_match_ == count_ ? 1.0 : 0.0;
  const double cov = n * sum_dz_ - static_cast<double>(sum_d_) * sum_z_;
  return cov / std::sqrt(var_d * var_z);
}

PerfVector weighted_summary(const PerfMatrix& m) {
  PerfVector acc;
  double total = 0.0;
  for (size_t i = 0; i < m.entries.size(); ++i) {
    if (!m.entries[i]) continue;
    const double w = static_cast<double>(m.weights[i]);
    if (w <= 0.0) continue;
    const PerfVector& v = *m.entries[i];
    acc.nwcf += w * v.nwcf;
    acc.p_sd += w * v.p_sd;
    acc.p_md += w * v.p_md;
    acc.p_fa += w * v.p_fa;
    acc.chi2 += w * v.chi2;
    total += w;
  }
  if (total <= 0.0) throw AllUntracked("weighted_summary: every entry is untracked");
  acc.nwcf /= total;
  acc.p_sd /= total;
  acc.p_md /= total;
  acc.p_fa /= total;
  acc.chi2 /= total;
  return acc;
}

CorrelationResult correlation_and_nwcf(const std::vector<const MetricsWindow*>& windows,
                                       int cells, int channels) {
  CorrelationResult out;
  out.matrix.resize(static_cast<size_t>(cells) * channels);
  double weighted = 0.0, total = 0.0;
  for (size_t i = 0; i < out.matrix.size(); ++i) {
    const MetricsWindow* w = i < windows.size() ? windows[i] : nullptr;
    if (!w || w->empty()) continue;
    const double phi = w->phi();
    out.matrix[i] = phi;
    weighted += static_cast<double>(w->size()) * phi;
    total += static_cast<double>(w->size());
  }
  if (total <= 0.0) throw AllUntracked("correlation_and_nwcf: every window is untracked");
  out.nwcf = weighted / total;
  return out;
}

}  // namespace wransim
