#pragma once

#include "autotune/model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace autotune {

/**
 * Seedable generator with a bit-reproducible output stream on every
 * platform: mt19937_64 for raw bits, with the uniform, normal and shuffle
 * transforms done here (the std distributions are implementation-defined).
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box-Muller; values come in cached pairs.
  double normal();
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // Fisher-Yates shuffle of 0..n-1.
  std::vector<Index> permutation(Index n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Independent stream seed for a (seed, stream) pair via the SplitMix64 finalizer.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace autotune
