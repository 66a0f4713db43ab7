#pragma once

// Deterministic, platform-stable random streams. A master seed is split into
// independent sub-streams with splitmix64; variates are derived from the raw
// 64-bit output directly (no implementation-defined std distributions), so
// the same seed yields byte-identical values everywhere.

#include <cmath>
#include <cstdint>
#include <random>

namespace tave {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  // Sub-stream `stream` of `master`: instance generation and start generation
  // use distinct stream ids so they never share state.
  Rng(std::uint64_t master, std::uint64_t stream = 0) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    std::uint64_t b = splitmix64(s);
    state_ = a ^ b;
    engine_.seed(state_);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (deterministic, two uniforms per pair).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  int sign() { return uniform() < 0.5 ? -1 : 1; }

 private:
  std::uint64_t state_;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tave
