#include "wransim/incumbent.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace wransim {

OnOffProcess::OnOffProcess(const ChannelActivity& pattern, double frame_seconds,
                           std::uint64_t seed)
    : pattern_(pattern), frame_(frame_seconds), eng_(seed) {
  // Stationary start: begin ON with probability mean_on / (mean_on + mean_off).
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  next_on_ = unit(eng_) < pattern_.mean_on / (pattern_.mean_on + pattern_.mean_off);
}

double OnOffProcess::draw_sojourn(bool on) {
  const double mean = on ? pattern_.mean_on : pattern_.mean_off;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double d;
  if (unit(eng_) < pattern_.burstiness) {
    // Power-law sojourn, shape 1.5, scaled so the mean matches the
    // exponential branch: scale = mean * (shape - 1) / shape.
    constexpr double shape = 1.5;
    const double scale = mean * (shape - 1.0) / shape;
    d = scale * std::pow(1.0 - unit(eng_), -1.0 / shape);
  } else {
    d = -mean * std::log1p(-unit(eng_));
  }
  // Round up to whole frames; a sojourn always lasts at least one frame.
  return std::max(frame_, std::ceil(d / frame_) * frame_);
}

void OnOffProcess::extend_to(double t) {
  while (horizon_ <= t) {
    const double d = draw_sojourn(next_on_);
    segments_.push_back({horizon_, horizon_ + d, next_on_});
    horizon_ += d;
    next_on_ = !next_on_;
  }
}

bool OnOffProcess::any_on(double t0, double t1) {
  extend_to(t1);
  // Boundaries sit on the frame grid but drift by ulps as the horizon
  // accumulates; overlaps shorter than a sliver are that drift, not
  // occupancy, and real overlaps last at least one frame.
  constexpr double kSliver = 1e-9;
  // Binary search for the first segment ending after t0.
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t0 + kSliver,
                             [](double t, const Segment& s) { return t < s.end; });
  for (; it != segments_.end() && it->begin < t1 - kSliver; ++it)
    if (it->on) return true;
  return false;
}

bool OnOffProcess::state_at(double t) {
  extend_to(t);
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double tt, const Segment& s) { return tt < s.end; });
  return it != segments_.end() && it->on;
}

IncumbentField::IncumbentField(const Topology& topo, const ScenarioConfig& cfg)
    : stations_(topo.stations), num_channels_(cfg.num_channels) {
  processes_.reserve(stations_.size());
  for (size_t s = 0; s < stations_.size(); ++s)
    processes_.emplace_back(cfg.activity.for_channel(stations_[s].channel),
                            cfg.clock.frame_seconds,
                            derive_seed(cfg.seed, stream::activity, s));

  cell_stations_.resize(topo.cells.size());
  for (size_t j = 0; j < topo.cells.size(); ++j)
    for (size_t s = 0; s < stations_.size(); ++s)
      if (distance(topo.cells[j].center, stations_[s].position) <=
          topo.cells[j].radius + stations_[s].coverage_radius)
        cell_stations_[j].push_back(static_cast<int>(s));
}

bool IncumbentField::ground_truth(CellId cell, ChannelId ch, double t0, double t1) {
  for (int s : cell_stations_[cell])
    if (stations_[s].channel == ch && processes_[s].any_on(t0, t1)) return true;
  return false;
}

bool IncumbentField::ground_truth_at(CellId cell, ChannelId ch, double t) {
  for (int s : cell_stations_[cell])
    if (stations_[s].channel == ch && processes_[s].state_at(t)) return true;
  return false;
}

std::vector<int> IncumbentField::audible(const Vec2& pos, ChannelId ch, double t0, double t1) {
  std::vector<int> out;
  for (size_t s = 0; s < stations_.size(); ++s) {
    if (stations_[s].channel != ch) continue;
    if (distance(pos, stations_[s].position) > stations_[s].coverage_radius) continue;
    if (processes_[s].any_on(t0, t1)) out.push_back(static_cast<int>(s));
  }
  return out;
}

}  // namespace wransim
