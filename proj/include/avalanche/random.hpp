#pragma once

#include <cstdint>

#include "avalanche/linalg.hpp"

namespace aval {

// SplitMix64 in counter mode: the i-th draw of stream s under seed k is a
// pure function of (k, s, i), so results do not depend on thread layout.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal by Box-Muller (both outputs used).
  double normal();

  Matrix gaussian(Index rows, Index cols);
  Vector gaussian(Index n);
  Vector unit(Index n);
  // Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
  // signs of diag(R) absorbed into Q.
  Matrix haar(Index n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace aval
