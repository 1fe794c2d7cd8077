#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hawc {

/// Portable seeded random stream.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Every derived quantity is computed here rather than through the
/// implementation-defined std:: distributions:
///   - uniform01: top 53 bits of one engine draw times 2^-53, in [0, 1).
///   - uniform_index: Lemire multiply-shift with rejection, unbiased.
///   - standard_normal: Box-Muller on (1 - u1, u2); the sine branch is cached
///     and returned by the next call.
///
/// A stream has a single owner. Independent streams for parallel or
/// per-step work come from derive_seed().
class SeededRng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64+boxmuller/v1";

  explicit SeededRng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(engine_()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Seed of the `stream`-th child stream of `seed` (splitmix64 finalizer
  /// applied to a golden-ratio combination of both).
  [[nodiscard]] static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hawc
