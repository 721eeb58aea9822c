#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "wransim/config.hpp"
#include "wransim/types.hpp"

namespace wransim {

struct Cell {
  Vec2 center;
  double radius = 0.0;
  Vec2 bs_position;                 // co-located with the center
  std::vector<Vec2> cpe_positions;  // uniform over the disk
};

struct Topology {
  std::vector<Cell> cells;
  std::vector<std::vector<CellId>> neighbors;  // adjacency lists, sorted
  std::vector<IncumbentStation> stations;      // explicit ones first, then auto-placed

  bool are_neighbors(CellId a, CellId b) const;
  // Global sensor index used to key link gains and sensing draws.
  int sensor_uid(CellId cell, SensorId sensor) const {
    return cell * (static_cast<int>(cells[cell].cpe_positions.size()) + 1) + sensor;
  }
  Vec2 sensor_position(CellId cell, SensorId sensor) const {
    return sensor == 0 ? cells[cell].bs_position : cells[cell].cpe_positions[sensor - 1];
  }
};

// Deterministic packed-disk layout: cell centers sit on a hexagonal spiral
// with spacing exactly two radii, so adjacent disks touch and the neighbor
// graph depends only on the cell count. CPE and auto station placement draw
// from the topology stream of the master seed.
Topology build_topology(const ScenarioConfig& cfg);

// Per-cell sensing duty. Sensor lists hold CPE slots (1-based SensorId);
// the base station implicitly senses every channel its cell tracks.
struct SensorAssignment {
  // channel -> CPE sensor ids, per cell
  std::vector<std::map<ChannelId, std::vector<SensorId>>> inband;
  std::vector<std::map<ChannelId, std::vector<SensorId>>> oob;

  int cpe_count(CellId cell, ChannelId ch) const;
  const std::vector<SensorId>* duty(CellId cell, ChannelId ch) const;
};

struct AssignmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Splits each cell's CPEs evenly across its operating channels and gives a
// configured fraction additional out-of-band duty over the tracked channels.
// When `prev` is supplied, sensors keep their previous channel while it
// stays operating, so per-channel score histories accumulate instead of
// being shuffled by unrelated list changes; only displaced sensors and
// rebalancing moves are reassigned.
// Throws AssignmentError when a cell operates channels without any CPE.
SensorAssignment assign_sensors(const Topology& topo,
                                const std::vector<std::set<ChannelId>>& operating,
                                const std::vector<std::set<ChannelId>>& tracked,
                                const ScenarioConfig& cfg,
                                const SensorAssignment* prev = nullptr);

}  // namespace wransim
