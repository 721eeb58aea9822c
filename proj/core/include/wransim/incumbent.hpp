#pragma once

#include <cstdint>
#include <vector>

#include "wransim/config.hpp"
#include "wransim/rng.hpp"
#include "wransim/topology.hpp"
#include "wransim/types.hpp"

namespace wransim {

// Alternating renewal process for one station. Sojourns are exponential,
// heavy-tailed (shape-1.5 power law with matched mean), or a per-sojourn
// mixture of the two; every sojourn is rounded up to whole frames so quiet
// periods sample a well-defined state.
class OnOffProcess {
 public:
  OnOffProcess(const ChannelActivity& pattern, double frame_seconds, std::uint64_t seed);

  void extend_to(double t);
  // True when any ON span intersects [t0, t1). Extends the timeline on demand.
  bool any_on(double t0, double t1);
  bool state_at(double t);

  struct Segment {
    double begin;
    double end;
    bool on;
  };
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  double draw_sojourn(bool on);

  ChannelActivity pattern_;
  double frame_;
  SplitMixEngine eng_;
  std::vector<Segment> segments_;
  double horizon_ = 0.0;
  bool next_on_;
};

// All stations of a scenario plus their activity processes, with the
// geometry needed to answer occupancy questions.
class IncumbentField {
 public:
  IncumbentField(const Topology& topo, const ScenarioConfig& cfg);

  int station_count() const { return static_cast<int>(stations_.size()); }
  const IncumbentStation& station(int s) const { return stations_[s]; }
  bool station_on(int s, double t0, double t1) { return processes_[s].any_on(t0, t1); }
  bool station_on_at(int s, double t) { return processes_[s].state_at(t); }

  // Channel k is busy for cell j when any ON station on k reaches into the
  // cell disk.
  bool ground_truth(CellId cell, ChannelId ch, double t0, double t1);
  bool ground_truth_at(CellId cell, ChannelId ch, double t);

  // Stations on channel ch whose footprint covers `pos` and that are ON
  // somewhere in [t0, t1); returns indices into the station list.
  std::vector<int> audible(const Vec2& pos, ChannelId ch, double t0, double t1);

 private:
  std::vector<IncumbentStation> stations_;
  std::vector<OnOffProcess> processes_;
  std::vector<std::vector<int>> cell_stations_;  // per cell: indices that reach the disk
  int num_channels_;
};

}  // namespace wransim
