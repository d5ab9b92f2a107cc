#pragma once

#include <cstdint>

#include "qht/operator.hpp"

namespace qht {

/// Counter-based SplitMix64 stream. The n-th draw depends only on (seed, n),
/// and normals use the cosine branch of Box-Muller without caching, so the
/// sequences below are reproducible in any language.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Integer uniform on [lo, hi].
  int uniform_int(int lo, int hi);
  double normal();
  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Entries (x + i y)/sqrt(2), x, y standard normal, row-major draw order.
Matrix random_gaussian(Rng& rng, Index n);
Eigen::MatrixXd random_gaussian_real(Rng& rng, Index n);

/// (G + G*)/2.
HermitianOperator random_hermitian(Rng& rng, Index n);
/// G* G + eps 1.
HermitianOperator random_positive(Rng& rng, Index n, double eps = 1e-3);
/// random_positive / trace.
HermitianOperator random_density(Rng& rng, Index n, double eps = 1e-3);
/// Q from the QR factorisation of G, with phases fixed so diag(R) > 0.
Matrix random_unitary(Rng& rng, Index n);

/// Real-symmetric variants (time-reversal invariant in the standard basis).
HermitianOperator random_real_symmetric(Rng& rng, Index n);
HermitianOperator random_real_positive(Rng& rng, Index n, double eps = 1e-3);
HermitianOperator random_real_density(Rng& rng, Index n, double eps = 1e-3);

}  // namespace qht
