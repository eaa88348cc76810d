#pragma once

#include <cmath>
#include <cstdint>

namespace bellforge {

// Counter-based splitmix64 stream. Restart k of a run with seed s draws from
// the stream derived as mix(s, k), so results are reproducible regardless of
// how restarts are scheduled across threads.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u = uniform(), v = uniform();
    while (u <= 1e-300) u = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double t = 6.283185307179586476925286766559 * v;
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    SplitMix g(seed ^ (0x632be59bd9b4e019ull * (stream + 1)));
    return g.next_u64();
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace bellforge
