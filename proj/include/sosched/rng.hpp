#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace sosched {

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag) { return mix64(mix64(seed) ^ mix64(tag + 0x5851f42d4c957f2dULL)); }

// Stream tags. Changing these changes every generated workload.
enum class Stream : std::uint64_t { Arrivals = 1, Volumes = 2, BigSpeeds = 3, Noise = 4 };

// mt19937_64 is specified bit-exactly by the standard, but the library
// distributions are not, so transforms are written out here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream s) : engine_(stream_seed(seed, static_cast<std::uint64_t>(s))) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  int uniform_int(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Counter-based standard normal for one matrix entry, so noise on (i, j) does
// not depend on matrix shape or traversal order.
inline double entry_normal(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
  Rng r(stream_seed(stream_seed(seed, static_cast<std::uint64_t>(Stream::Noise)), (i << 32) ^ j));
  return r.normal();
}

}  // namespace sosched
