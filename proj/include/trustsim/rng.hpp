#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace trustsim {

/// Deterministic random stream with explicitly specified draw semantics.
///
/// All randomness in a run flows through named substreams derived from the
/// run seed (see derive_stream). The underlying engine is std::mt19937_64,
/// whose output sequence is pinned by the standard, so integer draws are
/// bit-identical on every platform. Floating-point draws go through our own
/// transforms (never std:: distributions, whose sequences are
/// implementation-defined).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1): top 53 bits of the next engine output.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). bound must be positive. Uses modulo
  /// reduction; the bias of ~bound/2^64 is irrelevant at simulation scales.
  std::uint64_t uniform_below(std::uint64_t bound) {
    return next_u64() % bound;
  }

  /// Standard normal via Box-Muller. Consumes exactly two uniforms; no
  /// caching of the second deviate, so draw counts stay easy to audit.
  double normal() {
    double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Standard normal truncated to |z| <= cut by rejection.
  double truncated_normal(double cut = 3.0) {
    double z = normal();
    while (std::abs(z) > cut) z = normal();
    return z;
  }

 private:
  std::mt19937_64 engine_;
};

/// FNV-1a 64-bit hash. Used instead of std::hash so label-derived seeds do
/// not vary between standard library implementations.
constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent deterministic substream for (seed, label). Distinct labels
/// give statistically unrelated sequences; the same pair always reproduces
/// the same stream.
inline RandomStream derive_stream(std::uint64_t seed, std::string_view label) {
  return RandomStream(splitmix64(seed ^ splitmix64(fnv1a64(label))));
}

}  // namespace trustsim
