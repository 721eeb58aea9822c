#include <cstdint>
#include <random>
#include <set>

#include "doctest.h"
#include "wransim/rng.hpp"

using namespace wransim;

TEST_CASE("engine walks the splitmix64 sequence") {
  // Reference outputs of splitmix64 seeded with 0.
  SplitMixEngine eng(0);
  CHECK(eng() == 0xE220A8397B1DCDAFull);
  CHECK(eng() == 0x6E789E6AA1B965F4ull);
  CHECK(eng() == 0x06C45D188009454Full);
}

TEST_CASE("engine satisfies the uniform random bit generator contract") {
  CHECK(SplitMixEngine::min() == 0);
  CHECK(SplitMixEngine::max() == ~0ull);
  SplitMixEngine eng(123);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = unit(eng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("mix64 is constexpr and avalanche-sensitive") {
  static_assert(mix64(0) == 0);
  CHECK(mix64(1) != mix64(2));
  // Single flipped input bit changes roughly half the output bits.
  const std::uint64_t d = mix64(0x1234) ^ mix64(0x1235);
  int bits = 0;
  for (int i = 0; i < 64; ++i) bits += (d >> i) & 1;
  CHECK(bits > 16);
  CHECK(bits < 48);
}

TEST_CASE("derive_seed keys on every coordinate and their order") {
  const std::uint64_t a = derive_seed(42, stream::sensing, 1u, 2u, 3u);
  CHECK(a == derive_seed(42, stream::sensing, 1u, 2u, 3u));
  CHECK(a != derive_seed(43, stream::sensing, 1u, 2u, 3u));
  CHECK(a != derive_seed(42, stream::fading, 1u, 2u, 3u));
  CHECK(a != derive_seed(42, stream::sensing, 2u, 1u, 3u));
  CHECK(a != derive_seed(42, stream::sensing, 1u, 2u));
  CHECK(a != derive_seed(42, stream::sensing, 1u, 2u, 3u, 0u));
}

TEST_CASE("stream tags are pairwise distinct") {
  const std::set<std::uint64_t> tags{stream::topology, stream::activity, stream::fading,
                                     stream::sensing,  stream::reporting, stream::database,
                                     stream::sweep};
  CHECK(tags.size() == 7);
}

TEST_CASE("sweep seeds key on the point value, not its position") {
  const std::uint64_t s = sweep_point_seed(7, -30.0, 4);
  CHECK(s == sweep_point_seed(7, -30.0, 4));
  CHECK(s != sweep_point_seed(7, -30.0, 5));
  CHECK(s != sweep_point_seed(7, -30.0000001, 4));
  CHECK(s != sweep_point_seed(8, -30.0, 4));
}
