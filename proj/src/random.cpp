#include "qht/random.hpp"

#include <cmath>
#include <numbers>

#include "qht/error.hpp"

namespace qht {

std::uint64_t Rng::next_u64() {
  std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

int Rng::uniform_int(int lo, int hi) {
  if (hi < lo) throw ValidationError("uniform_int: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix random_gaussian(Rng& rng, Index n) {
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return g;
}

Eigen::MatrixXd random_gaussian_real(Rng& rng, Index n) {
  Eigen::MatrixXd g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = rng.normal();
  return g;
}

HermitianOperator random_hermitian(Rng& rng, Index n) {
  return HermitianOperator::from_hermitian_part(random_gaussian(rng, n));
}

HermitianOperator random_positive(Rng& rng, Index n, double eps) {
  const Matrix g = random_gaussian(rng, n);
  return HermitianOperator::from_hermitian_part(g.adjoint() * g + eps * Matrix::Identity(n, n));
}

HermitianOperator random_density(Rng& rng, Index n, double eps) {
  const HermitianOperator p = random_positive(rng, n, eps);
  return (1.0 / p.trace()) * p;
}

Matrix random_unitary(Rng& rng, Index n) {
  const Matrix g = random_gaussian(rng, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

HermitianOperator random_real_symmetric(Rng& rng, Index n) {
  const Eigen::MatrixXd g = random_gaussian_real(rng, n);
  return HermitianOperator::from_hermitian_part(((g + g.transpose()) / 2.0).cast<Complex>());
}

HermitianOperator random_real_positive(Rng& rng, Index n, double eps) {
  const Eigen::MatrixXd g = random_gaussian_real(rng, n);
  const Eigen::MatrixXd p = g.transpose() * g + eps * Eigen::MatrixXd::Identity(n, n);
  return HermitianOperator::from_hermitian_part(p.cast<Complex>());
}

HermitianOperator random_real_density(Rng& rng, Index n, double eps) {
  const HermitianOperator p = random_real_positive(rng, n, eps);
  return (1.0 / p.trace()) * p;
}

}  // namespace qht
