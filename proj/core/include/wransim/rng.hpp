#pragma once

#include <bit>
#include <cstdint>

namespace wransim {

// Finalizer of the splitmix64 generator; good avalanche, cheap.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h + 0x9E3779B97F4A7C15ull + mix64(v));
}

// Counter-based engine: one word of state, full 64-bit output per step.
// A fresh engine per (stream, event) key makes every draw a pure function
// of the master seed and the event coordinates, independent of the order
// in which the simulation happens to visit events.
class SplitMixEngine {
 public:
  using result_type = std::uint64_t;
  explicit SplitMixEngine(std::uint64_t seed = 0) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }
  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

namespace stream {
// Stable tags for the per-module randomness streams. Adding a stream or
// reordering draws inside one never perturbs the others.
inline constexpr std::uint64_t topology = 0x746f706f6cull;
inline constexpr std::uint64_t activity = 0x616374697669ull;
inline constexpr std::uint64_t fading = 0x666164696e67ull;
inline constexpr std::uint64_t sensing = 0x73656e73696eull;
inline constexpr std::uint64_t reporting = 0x7265706f7274ull;
inline constexpr std::uint64_t database = 0x646174616261ull;
inline constexpr std::uint64_t sweep = 0x7377656570ull;
}  // namespace stream

template <typename... Ts>
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, Ts... coords) {
  std::uint64_t h = hash_combine(master, tag);
  ((h = hash_combine(h, static_cast<std::uint64_t>(coords))), ...);
  return h;
}

// Seeds for sweep replicates hash the point *value*, not its position, so
// inserting a value into the sweep never changes the other points' runs.
inline std::uint64_t sweep_point_seed(std::uint64_t master, double value, int replicate) {
  return derive_seed(master, stream::sweep, std::bit_cast<std::uint64_t>(value),
                     static_cast<std::uint64_t>(replicate));
}

}  // namespace wransim
