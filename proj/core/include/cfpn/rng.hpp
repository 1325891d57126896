// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace cfpn {

/// Deterministic, splittable random stream.
///
/// Every consumer of randomness receives its own stream derived from
/// (master seed, path), where the path encodes what the stream is for
/// (drop index, ensemble member, oscillator id, ...). Streams derived
/// from the same (seed, path) are identical regardless of thread count
/// or execution order, which is what makes Monte-Carlo runs repeatable
/// under parallelism.
///
/// Gaussians come from Box-Muller over mt19937_64 so the byte stream
/// does not depend on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_path(seed, {})) {}
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
      : engine_(mix_path(seed, path)) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Standard normal sample (Box-Muller, trigonometric form).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // 1 - u keeps the log argument in (0, 1].
    const double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
    const double phi = 2.0 * pi() * uniform();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  double gaussian(double mean, double stddev) {
    return mean + stddev * gaussian();
  }

  /// Circularly-symmetric complex normal CN(0, 1).
  std::complex<double> circular_gaussian() {
    static constexpr double half = 0.7071067811865476;  // 1/sqrt(2)
    return {half * gaussian(), half * gaussian()};
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  static constexpr double pi() { return 3.141592653589793238462643383279502884; }

  // SplitMix64 chain over the path components; decorrelates nearby seeds
  // and path values before they feed the engine.
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  static std::uint64_t mix_path(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix(seed);
    for (std::uint64_t component : path) h = splitmix(h ^ component);
    return h;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Stream-purpose tags used in Rng derivation paths. Keeping channel and
/// phase-noise streams separate is what makes the symbol-0 spectral
/// efficiency identical across oscillator models on shared seeds.
enum StreamTag : std::uint64_t {
  kStreamGeometry = 1,
  kStreamShadow = 2,
  kStreamChannel = 3,
  kStreamPhaseNoise = 4,
  kStreamDrift = 5,
};

}  // namespace cfpn
