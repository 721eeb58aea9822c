#pragma once

#include <cmath>
#include <cstdint>

namespace wransim {

using CellId = int;              // 0-based cell index
using ChannelId = int;           // 1-based TV channel number
using QpIndex = std::int64_t;    // quiet-period tick counter
using SensorId = int;            // 0 = base station, >=1 CPE slot within a cell

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

}  // namespace wransim
