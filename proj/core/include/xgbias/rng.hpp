#pragma once

#include <cstdint>
#include <random>

namespace xgbias {

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for stream `index` under `master`. Streams are a pure function of
// (master, index...), so work can be scheduled in any order on any number
// of threads.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

template <typename... Rest>
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index,
                                    Rest... rest) noexcept {
  return stream_seed(stream_seed(master, index), static_cast<std::uint64_t>(rest)...);
}

// Engine plus a portable [0,1) draw. std::uniform_real_distribution is not
// specified bit-for-bit across standard libraries, so draws are built from
// the top 53 bits of the engine output instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace xgbias
