#ifndef FWI_RANDOM_H_
#define FWI_RANDOM_H_

#include <bit>
#include <cstdint>
#include <random>

namespace fwi {

// Every randomized routine takes one of these explicitly; there is no global
// generator anywhere in the library.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives the seed of child stream `index` from `parent`. Distinct indices
// give statistically independent streams, and the mapping depends only on
// (parent, index), so substreams can be handed out in any order.
constexpr std::uint64_t SplitSeed(std::uint64_t parent, std::uint64_t index) {
  return MixBits(parent ^ MixBits(index ^ 0x6a09e667f3bcc909ULL));
}

inline std::uint64_t SplitSeed(std::uint64_t parent, double key) {
  return SplitSeed(parent, std::bit_cast<std::uint64_t>(key));
}

inline Rng MakeRng(std::uint64_t seed) { return Rng(seed); }

}  // namespace fwi

#endif  // FWI_RANDOM_H_
