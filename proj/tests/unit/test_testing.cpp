#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "qht/error.hpp"
#include "qht/random.hpp"
#include "qht/testing.hpp"
#include "support/oracles.hpp"

using namespace qht;

namespace {

PositiveFunctional diag(std::initializer_list<double> values) {
  RealVector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return PositiveFunctional(HermitianOperator::diagonal(v));
}

TestProjection basis_projection(Index n, Index k) {
  RealVector v = RealVector::Zero(n);
  v(k) = 1.0;
  return TestProjection(HermitianOperator::diagonal(v));
}

}  // namespace

TEST_CASE("error probabilities of trivial and basis tests") {
  const PositiveFunctional nu = diag({0.3, 0.7});
  const PositiveFunctional omega = diag({0.6, 0.4});
  auto e = error_probability(nu, omega, TestProjection::zero(2));
  CHECK(e.type1 == doctest::Approx(1.0));
  CHECK(e.type2 == doctest::Approx(0.0));
  e = error_probability(nu, omega, TestProjection::identity(2));
  CHECK(e.type1 == doctest::Approx(0.0));
  CHECK(e.type2 == doctest::Approx(1.0));
  e = error_probability(nu, omega, basis_projection(2, 0));
  CHECK(e.type1 == doctest::Approx(0.4));
  CHECK(e.type2 == doctest::Approx(0.3));
}

TEST_CASE("non-projections are rejected") {
  RealVector v(2);
  v << 0.5, 1.0;
  CHECK_THROWS_AS(TestProjection(HermitianOperator::diagonal(v)), ValidationError);
  const PositiveFunctional nu = diag({0.3, 0.7});
  CHECK(error_probability(nu, nu, HermitianOperator::diagonal(v)).total() == doctest::Approx(0.5 * 0.3 + 0.7 + 0.5 * 0.3));
  v << -0.5, 1.0;
  CHECK_THROWS_AS(error_probability(nu, nu, HermitianOperator::diagonal(v)), ValidationError);
}

TEST_CASE("optimal test examples") {
  const PositiveFunctional w = diag({0.5, 0.5});
  const OptimalTest same = optimal_test(w, w);
  CHECK(same.min_error == doctest::Approx(1.0));
  CHECK(same.test.op().matrix().norm() == 0.0);

  const OptimalTest ex = optimal_test(diag({0.3, 0.7}), diag({0.6, 0.4}));
  CHECK(ex.min_error == doctest::Approx(0.7));
  CHECK(oracle::commuting_min_error({0.3, 0.7}, {0.6, 0.4}) == doctest::Approx(0.7));

  const double eps = 1e-6;
  const OptimalTest near_orth = optimal_test(diag({1 - eps, eps}), diag({eps, 1 - eps}));
  CHECK(near_orth.min_error == doctest::Approx(2 * eps).epsilon(1e-9));
}

TEST_CASE("optimal test is symmetric and unitarily invariant") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + trial % 6;
    const PositiveFunctional nu(random_density(rng, n));
    const PositiveFunctional omega(random_density(rng, n));
    const double d = optimal_test(nu, omega).min_error;
    CHECK(std::abs(d - optimal_test(omega, nu).min_error) <= 1e-11);
    const Matrix u = random_unitary(rng, n);
    const PositiveFunctional nu_u(nu.op().conjugated_by(u));
    const PositiveFunctional omega_u(omega.op().conjugated_by(u));
    CHECK(std::abs(d - optimal_test(nu_u, omega_u).min_error) <= 1e-10);
  }
}

TEST_CASE("commuting pairs against exhaustive enumeration") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + trial % 9;
    const Matrix u = random_unitary(rng, n);
    std::vector<double> p(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
    RealVector pv(n), qv(n);
    for (Index i = 0; i < n; ++i) {
      pv(i) = p[static_cast<std::size_t>(i)] = rng.uniform(0.01, 1.0);
      qv(i) = q[static_cast<std::size_t>(i)] = rng.uniform(0.01, 1.0);
    }
    const PositiveFunctional nu(HermitianOperator::from_eigensystem(pv, u));
    const PositiveFunctional omega(HermitianOperator::from_eigensystem(qv, u));
    CHECK(std::abs(optimal_test(nu, omega).min_error - oracle::commuting_min_error(p, q)) <= 1e-11);
  }
}

TEST_CASE("lower bound <= optimal error <= Chernoff bound") {
  Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + trial % 7;
    const PositiveFunctional nu(random_density(rng, n));
    const PositiveFunctional omega(random_density(rng, n));
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    const TestReport r = make_report(nu, omega, grid);
    CHECK(r.lower_bound <= r.optimal_total + 1e-10);
    CHECK(r.optimal_total <= r.total + 1e-12);
    for (const auto& [s, bound] : r.upper_bounds) CHECK(r.optimal_total <= bound + 1e-10);
  }
  const PositiveFunctional w = diag({0.5, 0.5});
  CHECK(modular_lower_bound(w, w) == doctest::Approx(0.5));
  CHECK(chernoff_upper_bound(w, w, 0.3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(chernoff_upper_bound(w, w, 1.5), ValidationError);
}

TEST_CASE("trace inequality gap") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + trial % 7;
    const PositiveFunctional a(random_positive(rng, n));
    const PositiveFunctional b(random_positive(rng, n));
    for (double s : {0.0, 0.1, 0.5, 0.9, 1.0}) CHECK(trace_inequality_gap(a, b, s) >= -1e-10);
    const double gap0 = trace_inequality_gap(a, b, 0.0);
    CHECK(gap0 == doctest::Approx(positive_part(a.op() - b.op()).trace()).epsilon(1e-10));
    CHECK(std::abs(trace_inequality_gap(a, a, 0.4)) <= 1e-10 * a.mass());
  }
}
