#pragma once

#include <cstdint>
#include <random>

#include "powdiv/types.hpp"

namespace powdiv::detail {

// SplitMix64 finalizer; used only to spread seed material, not as the
// generator itself.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_engine(const Seed& seed) {
  return std::mt19937_64(mix64(mix64(seed.value) ^ mix64(~seed.stream)));
}

}  // namespace powdiv::detail
