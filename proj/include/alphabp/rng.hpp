#pragma once

#include <cmath>
#include <cstdint>

namespace alphabp {

// Counter-free splittable generator built on splitmix64. Sub-streams are
// derived by mixing a stream id into the seed, so trial k of an experiment is
// reproducible in isolation. Gaussian draws use Box-Muller on the raw
// uniforms; both conventions are fixed so a port can match moments.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 mix(seed ^ (0x6a09e667f3bcc909ULL + stream * 0x3c6ef372fe94f82bULL));
  return mix.next();
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return gen_.next_double(); }

  std::uint64_t next_u64() { return gen_.next(); }

  // Standard normal via Box-Muller; the sine partner is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - gen_.next_double();  // in (0,1]
    double u2 = gen_.next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  SplitMix64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace alphabp
