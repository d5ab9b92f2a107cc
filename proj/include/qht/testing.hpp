#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qht/operator.hpp"
#include "qht/state.hpp"

namespace qht {

/// An orthogonal projection T; outcome 1 accepts omega, outcome 0 accepts nu.
class TestProjection {
 public:
  /// Throws ValidationError unless ||T^2 - T||_F <= 1e-10 * max(1, ||T||_F).
  explicit TestProjection(HermitianOperator op);
  static TestProjection zero(Index n);
  static TestProjection identity(Index n);

  const HermitianOperator& op() const { return op_; }
  Index dim() const { return op_.dim(); }

 private:
  HermitianOperator op_;
};

struct ErrorProbabilities {
  double type1 = 0.0;  // omega(1 - T)
  double type2 = 0.0;  // nu(T)
  double total() const { return type1 + type2; }
};

ErrorProbabilities error_probability(const PositiveFunctional& nu, const PositiveFunctional& omega,
                                     const TestProjection& test);

/// Generalised test 0 <= T <= 1 (checked to 1e-10).
ErrorProbabilities error_probability(const PositiveFunctional& nu, const PositiveFunctional& omega,
                                     const HermitianOperator& generalized_test);

struct OptimalTest {
  TestProjection test;
  /// nu(T) + omega(1 - T) for the returned T.
  double min_error = 0.0;
  /// (omega(1) + nu(1) - Tr|omega - nu|) / 2.
  double closed_form = 0.0;
};

/// Neyman-Pearson test: T is the support of (omega - nu)_+, with eigenvalues
/// inside the zero cluster excluded. Throws NumericalError if the two
/// expressions for the minimal error differ by more than 1e-11 * scale.
OptimalTest optimal_test(const PositiveFunctional& nu, const PositiveFunctional& omega);

/// Tr nu^s omega^{1-s} for s in [0, 1]; an upper bound on the minimal error.
double chernoff_upper_bound(const PositiveFunctional& nu, const PositiveFunctional& omega, double s);

/// sum_{lambda, mu} Tr(P_lambda(nu) P_mu(omega)) / (1/lambda + 1/mu); a lower
/// bound on the minimal error.
double modular_lower_bound(const PositiveFunctional& nu, const PositiveFunctional& omega);

/// Tr A^{1-s} B^s - (Tr A + Tr B - Tr|A - B|)/2, nonnegative for s in [0, 1].
double trace_inequality_gap(const PositiveFunctional& a, const PositiveFunctional& b, double s);

struct TestReport {
  double type1 = 0.0;
  double type2 = 0.0;
  double total = 0.0;
  double optimal_total = 0.0;
  std::map<double, double> upper_bounds;  // s -> Tr nu^s omega^{1-s}
  double lower_bound = 0.0;
};

/// Report for `test` (the optimal test when absent) with Chernoff bounds
/// evaluated on `s_grid`.
TestReport make_report(const PositiveFunctional& nu, const PositiveFunctional& omega,
                       const std::vector<double>& s_grid, const std::optional<TestProjection>& test = {});

}  // namespace qht
