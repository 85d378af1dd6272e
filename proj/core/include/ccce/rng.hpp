#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ccce {

using Rng = std::mt19937_64;

// Independent stream for a (seed, key...) tuple, e.g. (master seed, trial).
inline Rng derive_rng(std::initializer_list<std::uint64_t> key) {
  std::seed_seq seq(key.begin(), key.end());
  return Rng(seq);
}

}  // namespace ccce
