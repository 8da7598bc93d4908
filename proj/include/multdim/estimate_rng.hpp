#pragma once

#include <cstdint>

namespace multdim {

// splitmix64: tiny, seedable, and good enough for Monte Carlo here.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// splitmix64 finalizer as a standalone scrambler.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent-quality substream: hash the (master seed, substream index) pair.
// The scramble keeps substream start states off the golden-ratio lattice that
// the generator itself walks, so streams do not overlap.
inline SplitMix substream(std::uint64_t master_seed, std::uint64_t index) {
  return SplitMix(mix64(master_seed + 0x9e3779b97f4a7c15ull * (index + 1)) ^
                  mix64(~index + 0x632be59bd9b4e019ull));
}

}  // namespace multdim
