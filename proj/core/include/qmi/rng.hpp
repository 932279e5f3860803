#pragma once

#include <cstdint>
#include <random>

namespace qmi {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective 64-bit mixer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for stream `index` of a run with seed `master`. Streams for distinct
/// indices are decorrelated; the mapping is fixed so sweeps reproduce
/// regardless of how tasks are scheduled.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;
  return splitmix64_mix(splitmix64_mix(master + golden) + golden * (index + 1));
}

/// Uniform doubles in the open interval (0,1) from a 64-bit Mersenne Twister.
/// The conversion is done here rather than by std::uniform_real_distribution,
/// whose output is implementation-defined.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double next() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qmi
