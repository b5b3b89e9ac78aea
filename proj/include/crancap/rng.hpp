#pragma once

#include <cstdint>
#include <random>

namespace crancap {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent stream for (seed, index); the same pair always yields the same
// generator, so serial and parallel runs agree exactly.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  (void)splitmix64(s);
  s ^= 0x6a09e667f3bcc909ull * (index + 1);
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace crancap
