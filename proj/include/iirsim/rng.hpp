#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace iirsim {

/// Purpose tags for independent random substreams of one run. Each stream is
/// seeded from (run seed, tag) so that consuming more draws for one purpose
/// never shifts the draws of another.
enum class StreamPurpose : std::uint64_t {
  Placement = 0x706c6163656d656eULL,
  Noise = 0x6e6f697365000000ULL,
  Events = 0x6576656e74730000ULL,
  Warmup = 0x7761726d75700000ULL,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamPurpose purpose) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(purpose)));
}

/// mt19937_64 output is fixed by the standard; the distributions in
/// <random> are not, so the conversions below are spelled out here.
class RandomStream {
public:
  RandomStream(std::uint64_t seed, StreamPurpose purpose) : engine_(derive_seed(seed, purpose)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Box-Muller; consumes exactly two engine outputs per call.
  double gaussian(double mean, double sigma) {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + sigma * z;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace iirsim
