#pragma once
// Seeded generators for random generic, non-critical, weakly admissible modules.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "phimod/filphi.hpp"

namespace phimod {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  long integer(long lo, long hi);  // inclusive
  Scalar nonzero_rational(long bound);
  // Uniform-ish element of Q minus {0, 1} with numerator and denominator <= bound.
  Scalar parameter(long bound = 40);
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Strictly decreasing weights per embedding, entries in [0, spread].
std::vector<std::vector<int>> random_weights(Sampler& s, int n, int d_K, int spread = 6);
// alpha_i = p^{v_i} u_i with v_i = -sum_sigma h_{sigma,i} and random p-units u_i,
// resampled until generic.
Vec admissible_alphas(Sampler& s, const std::vector<std::vector<int>>& weights, long p);
// Random flag rows, resampled until the module is non-critical for every refinement.
FilteredPhiModule random_module(Sampler& s, int n, int d_K, long p,
                                const std::optional<std::vector<std::vector<int>>>& weights = std::nullopt);

}  // namespace phimod
