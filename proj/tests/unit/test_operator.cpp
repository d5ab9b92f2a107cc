#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qht/error.hpp"
#include "qht/operator.hpp"
#include "qht/random.hpp"
#include "qht/state.hpp"
#include "support/oracles.hpp"

using namespace qht;

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

TEST_CASE("construction rejects non-Hermitian input and symmetrises tiny defects") {
  Matrix m(2, 2);
  m << 1, Complex(0, 1), Complex(0, 1), 2;
  CHECK_THROWS_AS(HermitianOperator{m}, ValidationError);

  Matrix almost = pauli_x();
  almost(0, 1) += 1e-14;
  const HermitianOperator a(almost);
  CHECK((a.matrix() - a.matrix().adjoint()).norm() == 0.0);

  CHECK_THROWS_AS(HermitianOperator{Matrix(2, 3)}, ValidationError);
}

TEST_CASE("eigenvalues of sigma_x and clustering of degenerate spectra") {
  const HermitianOperator x(pauli_x());
  CHECK(x.min_eigenvalue() == doctest::Approx(-1.0));
  CHECK(x.max_eigenvalue() == doctest::Approx(1.0));
  CHECK(x.norm() == doctest::Approx(1.0));

  const HermitianOperator id = HermitianOperator::identity(4);
  const SpectralDecomposition d = decompose(id);
  REQUIRE(d.size() == 1);
  CHECK(d.rank(0) == 4);

  RealVector v(4);
  v << 1.0, 1.0 + 1e-13, 2.0, 2.0 + 5e-11;
  const SpectralDecomposition dd = decompose(HermitianOperator::diagonal(v));
  REQUIRE(dd.size() == 2);
  CHECK(dd.rank(0) == 2);
  CHECK(dd.rank(1) == 2);
}

TEST_CASE("spectral decomposition reconstructs random operators") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial % 7;
    const HermitianOperator a = random_hermitian(rng, n);
    const SpectralDecomposition d = decompose(a);
    CHECK((d.reconstruct().matrix() - a.matrix()).norm() <= 1e-12 * std::max(1.0, a.matrix().norm()));
    Matrix sum = Matrix::Zero(n, n);
    for (const auto& p : d.projectors) {
      CHECK((p.matrix() * p.matrix() - p.matrix()).norm() < 1e-12);
      sum += p.matrix();
    }
    CHECK((sum - Matrix::Identity(n, n)).norm() < 1e-12);
  }
}

TEST_CASE("positive and negative parts") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianOperator a = random_hermitian(rng, 5);
    const SpectralParts p = spectral_parts(a);
    CHECK((p.positive.matrix() - p.negative.matrix() - a.matrix()).norm() < 1e-12);
    CHECK((p.positive.matrix() + p.negative.matrix() - p.absolute.matrix()).norm() < 1e-12);
    CHECK((p.positive.matrix() * p.negative.matrix()).norm() < 1e-12);
    CHECK(p.positive.min_eigenvalue() > -1e-12);
    CHECK(p.negative.min_eigenvalue() > -1e-12);
    CHECK(trace_norm(a) == doctest::Approx(p.absolute.trace()).epsilon(1e-12));
  }
}

TEST_CASE("functional calculus against independent oracles") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianOperator a = random_positive(rng, 4);
    const PositiveFunctional f(a);
    const Matrix p = power(f, 0.3).matrix();
    const Matrix ref = oracle::binary_power(a.matrix(), 0.3);
    CHECK((p - ref).norm() <= 1e-9 * ref.norm());

    const Matrix sq = power(f, 0.5).matrix();
    CHECK((sq * sq - a.matrix()).norm() <= 1e-10 * a.matrix().norm());

    const Matrix lg = logarithm(f).matrix();
    CHECK((lg.exp() - a.matrix()).norm() <= 1e-10 * a.matrix().norm());
  }
}

TEST_CASE("apply_function reports non-finite values") {
  RealVector v(2);
  v << 0.0, 1.0;
  CHECK_THROWS_AS(apply_function(HermitianOperator::diagonal(v), [](double x) { return std::log(x); }),
                  NumericalError);
}

TEST_CASE("unitary_exp matches the closed form for sigma_x") {
  const HermitianOperator x(pauli_x());
  const double t = 0.7;
  Matrix expected(2, 2);
  expected << std::cos(t), Complex(0, -std::sin(t)), Complex(0, -std::sin(t)), std::cos(t);
  CHECK((unitary_exp(x, t) - expected).norm() < 1e-14);
}

TEST_CASE("kron and embed") {
  const HermitianOperator z(pauli_z());
  const HermitianOperator id = HermitianOperator::identity(2);
  const std::array<Index, 3> dims{2, 2, 2};
  const std::array<Index, 1> middle{1};
  const HermitianOperator e = embed(z, dims, middle);
  CHECK((e.matrix() - kron(kron(id, z), id).matrix()).norm() == 0.0);

  const HermitianOperator zz = kron(z, z);
  const std::array<Index, 2> ends{0, 2};
  const HermitianOperator e2 = embed(zz, dims, ends);
  CHECK((e2.matrix() - kron(kron(z, id), z).matrix()).norm() == 0.0);

  const std::array<Index, 2> dims2{2, 3};
  const std::array<Index, 1> second{1};
  RealVector d3(3);
  d3 << 1, 2, 3;
  const HermitianOperator h3 = HermitianOperator::diagonal(d3);
  CHECK((embed(h3, dims2, second).matrix() - kron(id, h3).matrix()).norm() == 0.0);
}

TEST_CASE("trace_product and commutator") {
  Rng rng(8);
  const HermitianOperator a = random_hermitian(rng, 6);
  const HermitianOperator b = random_hermitian(rng, 6);
  CHECK(trace_product(a, b) == doctest::Approx((a.matrix() * b.matrix()).trace().real()));
  const HermitianOperator c = commutator_i(a, b);
  const Matrix expected = Complex(0, -1) * (a.matrix() * b.matrix() - b.matrix() * a.matrix());
  CHECK((c.matrix() - expected).norm() < 1e-12);
}

TEST_CASE("random generators are reproducible and well formed") {
  Rng r1(42);
  Rng r2(42);
  CHECK((random_gaussian(r1, 3) - random_gaussian(r2, 3)).norm() == 0.0);
  Rng rng(9);
  const Matrix u = random_unitary(rng, 5);
  CHECK((u * u.adjoint() - Matrix::Identity(5, 5)).norm() < 1e-13);
  const HermitianOperator rho = random_density(rng, 5);
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(rho.min_eigenvalue() > 0);
  CHECK(random_real_density(rng, 4).is_real(0.0));
}
