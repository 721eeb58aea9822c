#include "wransim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <random>

#include "wransim/rng.hpp"

namespace wransim {

namespace {

// Axial hex coordinates -> cartesian, unit spacing between adjacent centers.
Vec2 axial_to_xy(int q, int r) {
  return {q + 0.5 * r, r * std::numbers::sqrt3 / 2.0};
}

// Spiral enumeration of the hex lattice: origin, then ring 1, ring 2, ...
std::vector<Vec2> hex_spiral(int count) {
  std::vector<Vec2> out;
  out.reserve(count);
  out.push_back({0.0, 0.0});
  static constexpr int dq[6] = {+1, +1, 0, -1, -1, 0};
  static constexpr int dr[6] = {0, -1, -1, 0, +1, +1};
  for (int ring = 1; static_cast<int>(out.size()) < count; ++ring) {
    int q = -ring, r = ring;  // start at the south-west corner of the ring
    for (int side = 0; side < 6 && static_cast<int>(out.size()) < count; ++side) {
      for (int step = 0; step < ring && static_cast<int>(out.size()) < count; ++step) {
        out.push_back(axial_to_xy(q, r));
        q += dq[side];
        r += dr[side];
      }
    }
  }
  return out;
}

}  // namespace

bool Topology::are_neighbors(CellId a, CellId b) const {
  if (a == b) return false;
  const auto& adj = neighbors[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

Topology build_topology(const ScenarioConfig& cfg) {
  Topology topo;
  const double spacing = 2.0 * cfg.cell_radius;
  std::vector<Vec2> grid = hex_spiral(cfg.num_cells);

  topo.cells.resize(cfg.num_cells);
  for (int j = 0; j < cfg.num_cells; ++j) {
    Cell& c = topo.cells[j];
    c.center = {grid[j].x * spacing, grid[j].y * spacing};
    c.radius = cfg.cell_radius;
    c.bs_position = c.center;
  }

  topo.neighbors.resize(cfg.num_cells);
  const double touch = spacing * (1.0 + 1e-9);
  for (int a = 0; a < cfg.num_cells; ++a)
    for (int b = a + 1; b < cfg.num_cells; ++b)
      if (distance(topo.cells[a].center, topo.cells[b].center) <= touch) {
        topo.neighbors[a].push_back(b);
        topo.neighbors[b].push_back(a);
      }
  for (auto& adj : topo.neighbors) std::sort(adj.begin(), adj.end());

  SplitMixEngine eng(derive_seed(cfg.seed, stream::topology));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int j = 0; j < cfg.num_cells; ++j) {
    Cell& c = topo.cells[j];
    c.cpe_positions.reserve(cfg.cpes_per_cell);
    for (int i = 0; i < cfg.cpes_per_cell; ++i) {
      const double rad = c.radius * std::sqrt(unit(eng));
      const double ang = 2.0 * std::numbers::pi * unit(eng);
      c.cpe_positions.push_back(
          {c.center.x + rad * std::cos(ang), c.center.y + rad * std::sin(ang)});
    }
  }

  topo.stations = cfg.stations;
  for (auto& s : topo.stations)
    if (s.tx_power <= 0.0)
      s.tx_power = cfg.radio.noise_power * db_to_linear(cfg.radio.tx_snr_db);

  if (cfg.auto_stations > 0) {
    double lo_x = topo.cells[0].center.x, hi_x = lo_x;
    double lo_y = topo.cells[0].center.y, hi_y = lo_y;
    for (const Cell& c : topo.cells) {
      lo_x = std::min(lo_x, c.center.x);
      hi_x = std::max(hi_x, c.center.x);
      lo_y = std::min(lo_y, c.center.y);
      hi_y = std::max(hi_y, c.center.y);
    }
    lo_x -= cfg.cell_radius;
    hi_x += cfg.cell_radius;
    lo_y -= cfg.cell_radius;
    hi_y += cfg.cell_radius;
    for (int s = 0; s < cfg.auto_stations; ++s) {
      IncumbentStation st;
      st.position = {lo_x + (hi_x - lo_x) * unit(eng), lo_y + (hi_y - lo_y) * unit(eng)};
      st.channel = 1 + static_cast<ChannelId>(unit(eng) * cfg.num_channels);
      st.channel = std::min(st.channel, cfg.num_channels);
      st.coverage_radius = cfg.auto_coverage_radius;
      st.tx_power = cfg.radio.noise_power * db_to_linear(cfg.radio.tx_snr_db);
      topo.stations.push_back(st);
    }
  }
  return topo;
}

int SensorAssignment::cpe_count(CellId cell, ChannelId ch) const {
  if (const auto* d = duty(cell, ch)) return static_cast<int>(d->size());
  return 0;
}

const std::vector<SensorId>* SensorAssignment::duty(CellId cell, ChannelId ch) const {
  if (cell < 0 || cell >= static_cast<CellId>(inband.size())) return nullptr;
  if (auto it = inband[cell].find(ch); it != inband[cell].end()) return &it->second;
  if (auto it = oob[cell].find(ch); it != oob[cell].end()) return &it->second;
  return nullptr;
}

SensorAssignment assign_sensors(const Topology& topo,
                                const std::vector<std::set<ChannelId>>& operating,
                                const std::vector<std::set<ChannelId>>& tracked,
                                const ScenarioConfig& cfg,
                                const SensorAssignment* prev) {
  SensorAssignment out;
  const int cells = static_cast<int>(topo.cells.size());
  out.inband.resize(cells);
  out.oob.resize(cells);

  for (int j = 0; j < cells; ++j) {
    const int n = static_cast<int>(topo.cells[j].cpe_positions.size());
    const auto& ocl = operating[j];
    if (!ocl.empty() && n == 0)
      throw AssignmentError(
          fmt::format("cell {} operates {} channel(s) but has no CPEs", j, ocl.size()));
    if (!ocl.empty() && n < static_cast<int>(ocl.size()))
      throw AssignmentError(fmt::format(
          "cell {}: {} CPEs cannot cover {} operating channels", j, n, ocl.size()));

    // Even split over the sorted operating set: the first n % m channels
    // take the remainder. Incumbent crews are retained up to the channel's
    // quota before any displaced or surplus sensor is re-seated.
    std::vector<ChannelId> op(ocl.begin(), ocl.end());
    if (!op.empty()) {
      const int m = static_cast<int>(op.size());
      const auto quota = [&](int idx) { return n / m + (idx < n % m ? 1 : 0); };
      std::vector<bool> placed(static_cast<size_t>(n) + 1, false);
      auto& crews = out.inband[j];
      if (prev && j < static_cast<int>(prev->inband.size())) {
        for (int idx = 0; idx < m; ++idx) {
          const auto it = prev->inband[j].find(op[idx]);
          if (it == prev->inband[j].end()) continue;
          auto& crew = crews[op[idx]];
          for (SensorId s : it->second) {
            if (static_cast<int>(crew.size()) == quota(idx)) break;
            if (s >= 1 && s <= n && !placed[s]) {
              crew.push_back(s);
              placed[s] = true;
            }
          }
        }
      }
      SensorId next = 1;
      for (int idx = 0; idx < m; ++idx) {
        auto& crew = crews[op[idx]];
        while (static_cast<int>(crew.size()) < quota(idx)) {
          while (placed[next]) ++next;
          crew.push_back(next);
          placed[next] = true;
        }
      }
    }

    std::vector<ChannelId> watch;
    for (ChannelId k : tracked[j])
      if (!ocl.contains(k)) watch.push_back(k);
    for (ChannelId k : watch) out.oob[j][k];  // at minimum the BS watches it
    if (!watch.empty() && n > 0) {
      const int scouts = std::max(1, static_cast<int>(std::floor(cfg.mgmt.obs_fraction * n)));
      for (int i = 0; i < scouts; ++i)
        out.oob[j][watch[i % watch.size()]].push_back(i + 1);
    }
  }
  return out;
}

}  // namespace wransim
