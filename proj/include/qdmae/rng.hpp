#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace qdmae {

/// Deterministic random stream used throughout the library.
///
/// Built on std::mt19937_64 (whose output is pinned by the C++ standard) with
/// our own uniform/normal/integer transforms, because the standard library's
/// distributions are implementation-defined and would break the byte-identical
/// reproducibility contract across toolchains.
///
/// Independent sub-streams are derived from a master seed with splitmix64, so
/// per-emitter streams depend only on (master_seed, stream index), never on
/// thread scheduling or call order elsewhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Derive an independent stream: splitmix64 of (seed ^ stream tag).
  static Rng derive(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t x = master_seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    return Rng(splitmix64(splitmix64(x)));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound); bound must be >= 1. Rejection sampling
  /// keeps the distribution exactly uniform.
  std::uint64_t uniform_int(std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    // 2^64 mod bound, computed without overflow.
    const std::uint64_t rem = (max % bound + 1) % bound;
    std::uint64_t x = gen_();
    if (rem != 0) {
      while (x > max - rem) x = gen_();
    }
    return x % bound;
  }

  /// Standard normal via Box-Muller; the partner draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so log(u1) is finite; u2 in [0, 1).
    const double u1 =
        (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;  // 2*pi*u2
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qdmae
