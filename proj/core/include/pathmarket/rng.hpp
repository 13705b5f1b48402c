#pragma once

#include <cstdint>

namespace pm {

// Counter-friendly splitmix64 generator. Self-contained so that streams are
// identical across platforms and standard library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Inclusive bounds; unbiased enough for test-instance generation.
  int uniform_int(int lo, int hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>((static_cast<unsigned __int128>(next()) * span) >> 64);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Independent stream for (seed, index); used for per-trial simulation RNGs.
  static Rng derive(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0x94d049bb133111ebULL * (index + 1)));
    std::uint64_t s = mix.next();
    return Rng(s);
  }

 private:
  std::uint64_t state_;
};

}  // namespace pm
