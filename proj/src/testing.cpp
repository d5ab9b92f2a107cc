#include "qht/testing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qht/error.hpp"

namespace qht {

namespace {

constexpr double kProjectionTol = 1e-10;
constexpr double kOptimalAgreementTol = 1e-11;

void require_dims(const PositiveFunctional& nu, const PositiveFunctional& omega, Index t_dim) {
  if (nu.dim() != omega.dim() || nu.dim() != t_dim) {
    std::ostringstream os;
    os << "dimension mismatch: nu " << nu.dim() << ", omega " << omega.dim() << ", test " << t_dim;
    throw ValidationError(os.str());
  }
}

}  // namespace

TestProjection::TestProjection(HermitianOperator op) : op_(std::move(op)) {
  const Matrix& t = op_.matrix();
  const double defect = (t * t - t).norm();
  if (defect > kProjectionTol * std::max(1.0, t.norm())) {
    std::ostringstream os;
    os << "test is not a projection: ||T^2 - T||_F = " << defect;
    throw ValidationError(os.str());
  }
}

TestProjection TestProjection::zero(Index n) { return TestProjection(HermitianOperator::zero(n)); }

TestProjection TestProjection::identity(Index n) { return TestProjection(HermitianOperator::identity(n)); }

ErrorProbabilities error_probability(const PositiveFunctional& nu, const PositiveFunctional& omega,
                                     const TestProjection& test) {
  require_dims(nu, omega, test.dim());
  ErrorProbabilities e;
  e.type2 = nu(test.op());
  e.type1 = omega.mass() - omega(test.op());
  return e;
}

ErrorProbabilities error_probability(const PositiveFunctional& nu, const PositiveFunctional& omega,
                                     const HermitianOperator& generalized_test) {
  require_dims(nu, omega, generalized_test.dim());
  const double lo = generalized_test.min_eigenvalue();
  const double hi = generalized_test.max_eigenvalue();
  if (lo < -kProjectionTol || hi > 1.0 + kProjectionTol) {
    std::ostringstream os;
    os << "generalized test must satisfy 0 <= T <= 1, spectrum in [" << lo << ", " << hi << "]";
    throw ValidationError(os.str());
  }
  ErrorProbabilities e;
  e.type2 = nu(generalized_test);
  e.type1 = omega.mass() - omega(generalized_test);
  return e;
}

OptimalTest optimal_test(const PositiveFunctional& nu, const PositiveFunctional& omega) {
  require_dims(nu, omega, omega.dim());
  const HermitianOperator diff = omega.op() - nu.op();
  const SpectralDecomposition d = decompose(diff);
  const Index n = diff.dim();

  Matrix t = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d.eigenvalues[i] > d.zero_tol) t += d.projectors[i].matrix();

  OptimalTest out{TestProjection(HermitianOperator::from_hermitian_part(t)), 0.0, 0.0};
  out.min_error = error_probability(nu, omega, out.test).total();
  out.closed_form = 0.5 * (omega.mass() + nu.mass() - trace_norm(diff));
  const double scale = std::max(1.0, omega.mass() + nu.mass());
  if (std::abs(out.min_error - out.closed_form) > kOptimalAgreementTol * scale) {
    std::ostringstream os;
    os << "optimal test error " << out.min_error << " disagrees with closed form " << out.closed_form;
    throw NumericalError(os.str());
  }
  return out;
}

double chernoff_upper_bound(const PositiveFunctional& nu, const PositiveFunctional& omega, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("chernoff_upper_bound: s must lie in [0, 1]");
  return trace_product(power(nu, s), power(omega, 1.0 - s));
}

double modular_lower_bound(const PositiveFunctional& nu, const PositiveFunctional& omega) {
  if (nu.dim() != omega.dim()) throw ValidationError("modular_lower_bound: dimension mismatch");
  const SpectralDecomposition& dn = nu.spectrum();
  const SpectralDecomposition& dw = omega.spectrum();
  double total = 0.0;
  for (std::size_t a = 0; a < dn.size(); ++a)
    for (std::size_t b = 0; b < dw.size(); ++b) {
      const double overlap = (dn.bases[a].adjoint() * dw.bases[b]).squaredNorm();
      total += overlap / (1.0 / dn.eigenvalues[a] + 1.0 / dw.eigenvalues[b]);
    }
  return total;
}

double trace_inequality_gap(const PositiveFunctional& a, const PositiveFunctional& b, double s) {
  if (a.dim() != b.dim()) throw ValidationError("trace_inequality_gap: dimension mismatch");
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("trace_inequality_gap: s must lie in [0, 1]");
  const double lhs = 0.5 * (a.mass() + b.mass() - trace_norm(a.op() - b.op()));
  return trace_product(power(a, 1.0 - s), power(b, s)) - lhs;
}

TestReport make_report(const PositiveFunctional& nu, const PositiveFunctional& omega,
                       const std::vector<double>& s_grid, const std::optional<TestProjection>& test) {
  const OptimalTest opt = optimal_test(nu, omega);
  const ErrorProbabilities e = error_probability(nu, omega, test ? *test : opt.test);
  TestReport r;
  r.type1 = e.type1;
  r.type2 = e.type2;
  r.total = e.total();
  r.optimal_total = opt.min_error;
  for (double s : s_grid) r.upper_bounds[s] = chernoff_upper_bound(nu, omega, s);
  r.lower_bound = modular_lower_bound(nu, omega);
  return r;
}

}  // namespace qht
