#pragma once

#include <vector>

#include "qht/operator.hpp"

namespace qht {

/// Faithful positive functional nu(A) = Tr(nu A). States are the trace-one case.
///
/// Construction rejects any eigenvalue at or below 1e-12 * ||op||: non-faithful
/// functionals are outside the library's scope and are never clipped.
class PositiveFunctional {
 public:
  explicit PositiveFunctional(HermitianOperator op);

  /// op / Tr(op).
  static PositiveFunctional normalized(const HermitianOperator& op);

  const HermitianOperator& op() const { return op_; }
  Index dim() const { return op_.dim(); }
  /// nu(1).
  double mass() const { return op_.trace(); }
  bool faithful() const { return true; }
  bool is_state(double tol = 1e-10) const;
  double operator()(const HermitianOperator& a) const { return trace_product(op_, a); }

  /// Spectral decomposition with the default clustering tolerance (cached).
  const SpectralDecomposition& spectrum() const;

 private:
  HermitianOperator op_;
  std::shared_ptr<const SpectralDecomposition> spectrum_;
};

struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

/// Finite atomic measure on the real line with strictly ascending atoms.
class SpectralMeasure {
 public:
  SpectralMeasure() = default;
  /// Sorts the atoms, merges those within tol * max(1, max|x|) and drops
  /// atoms whose merged weight is not positive.
  static SpectralMeasure from_atoms(std::vector<Atom> atoms, double merge_tol = 1e-10);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double mass() const;
  /// int exp(-s x) dmu(x).
  double laplace(double s) const;
  /// log int exp(-s x) dmu(x), evaluated with a max shift.
  double log_laplace(double s) const;
  double moment(int k) const;
  double mean() const;
  double variance() const;
  /// Pushforward under x -> c x.
  SpectralMeasure scaled(double c) const;

 private:
  std::vector<Atom> atoms_;
};

/// Tr nu (log omega - log nu).
double relative_entropy(const PositiveFunctional& nu, const PositiveFunctional& omega);

/// log Tr nu^s omega^{1-s}, natural log, any real s. Returns +-infinity if the
/// trace overflows or underflows after rescaling by the spectral radii.
double renyi_relative_entropy(const PositiveFunctional& nu, const PositiveFunctional& omega, double s);

/// Tr nu^s omega^{1-s} itself (the Chernoff-type quantity).
double renyi_trace(const PositiveFunctional& nu, const PositiveFunctional& omega, double s);

/// Spectral measure of -log Delta_{nu|omega} against omega^{1/2}: atoms at
/// log mu - log lambda with weight mu Tr P_lambda(nu) P_mu(omega), merged on
/// the x axis after forming the ratios.
SpectralMeasure modular_spectral_measure(const PositiveFunctional& nu, const PositiveFunctional& omega);

/// [Tr (nu1^s - nu2^s) omega1^{1-s}] - [Tr (nu1^s - nu2^s) omega2^{1-s}] for
/// nu2 <= nu1, omega2 <= omega1. Nonnegative by operator monotonicity.
/// Throws ValidationError if an ordering fails (minimum eigenvalue of the
/// difference below -1e-12) or s is outside [0, 1].
double monotonicity_gap(const PositiveFunctional& nu1, const PositiveFunctional& nu2,
                        const PositiveFunctional& omega1, const PositiveFunctional& omega2, double s);

/// x^p on a positive functional via its cached spectrum.
HermitianOperator power(const PositiveFunctional& a, double p);
HermitianOperator logarithm(const PositiveFunctional& a);

}  // namespace qht
