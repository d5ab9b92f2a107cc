#pragma once

#include <functional>
#include <vector>

#include "qht/operator.hpp"

namespace qht {

/// Default spectral margin for one-particle densities: delta <= sp(T) <= 1 - delta.
inline constexpr double kDensityMargin = 1e-8;

/// (1 + e^{beta (h - mu)})^{-1} through a logistic that never overflows.
HermitianOperator fermi_dirac(const HermitianOperator& h, double beta, double mu);
double fermi_dirac(double energy, double beta, double mu);

/// A pair of one-particle densities prepared for repeated Renyi evaluations.
///
/// Ent_s(nu_A | omega_B) = log det[A^s B^{1-s} + (1-A)^s (1-B)^{1-s}]
///   = s Tr log(1-A) + (1-s) Tr log(1-B) + log det(1 + G G*),
/// G = a^{s/2} b^{(1-s)/2} with a = A/(1-A), b = B/(1-B), evaluated by Cholesky.
class QuasiFreePair {
 public:
  /// Throws ValidationError if a spectrum leaves [margin, 1 - margin].
  QuasiFreePair(const HermitianOperator& a, const HermitianOperator& b, double margin = kDensityMargin);

  /// From the log-odds log(x / (1 - x)) of both spectra and the overlap
  /// W = V_A^* V_B of the eigenbases.
  static QuasiFreePair from_log_odds(RealVector log_odds_a, RealVector log_odds_b, Matrix overlap,
                                     double margin = kDensityMargin);

  Index dim() const { return overlap_.rows(); }
  double renyi(double s) const;

 private:
  QuasiFreePair() = default;
  void init(double margin);

  Matrix overlap_;
  RealVector log_odds_a_, log_odds_b_;
  double log_hole_a_ = 0.0, log_hole_b_ = 0.0;
};

/// One-shot Ent_s of the gauge-invariant quasi-free states with densities A and B.
double quasifree_renyi(const HermitianOperator& a, const HermitianOperator& b, double s,
                       double margin = kDensityMargin);

/// int_0^{2 pi} log[A(k)^s B(k)^{1-s} + (1-A(k))^s (1-B(k))^{1-s}] dk / 2 pi.
double szego_limit(const std::function<double(double)>& a, const std::function<double(double)>& b, double s,
                   double quad_tol = 1e-8);

/// n x n section of the Toeplitz operator with real symbol f on [0, 2 pi];
/// Fourier coefficients by the trapezoid rule on `nodes` points.
HermitianOperator toeplitz_section(const std::function<double(double)>& symbol, Index n, int nodes = 8192);

struct Lead {
  double beta = 1.0;
  double mu = 0.0;
};

/// Finite sample coupled through unit vectors chi_j to semi-infinite
/// tight-binding leads with dispersion 1 - cos k.
struct EbbSpec {
  HermitianOperator h_sample;
  std::vector<Vector> chi;
  double lambda = 0.1;
  std::vector<Lead> leads;

  /// Throws ValidationError on dimension mismatch, non-unit chi_j or beta_j <= 0.
  void validate() const;
  std::size_t n_leads() const { return leads.size(); }
};

using ScatteringFn = std::function<Matrix(double)>;

/// Lead dispersion 1 - cos k.
inline double lead_energy(double k) { return 1.0 - std::cos(k); }

/// On-shell scattering matrix at momentum k in (0, pi):
/// s_ij = delta_ij - 4 i lambda^2 sin k <chi_i| (E - h_S - lambda^2 g(E) sum_j |chi_j><chi_j|)^{-1} |chi_j>,
/// with E = 1 - cos k and lead surface Green's function g = -2 e^{ik}.
/// Throws NumericalError at a resonance or if the result is not unitary to 1e-8.
Matrix ebb_scattering(const EbbSpec& spec, double k);

/// Piecewise-linear interpolation of a tabulated scattering matrix followed by
/// projection onto the unitaries (polar factor). Throws ValidationError if a
/// table entry is not unitary to 1e-10 or the k nodes are not increasing.
ScatteringFn interpolate_scattering(std::vector<double> k, std::vector<Matrix> table);

/// int_0^pi log det(1 + T(k)(e^{-s vs(k)} S(k) e^{s vs(k)} S(k)^* - 1)) sin k dk / 2 pi,
/// vs_jj(k) = -beta_j (1 - cos k - mu_j), T(k) = (1 + e^{-vs(k)})^{-1}.
double ebb_e(const EbbSpec& spec, double s, const ScatteringFn& scattering, double quad_tol = 1e-8);
double ebb_e(const EbbSpec& spec, double s, double quad_tol = 1e-8);

struct LandauerResult {
  double sigma_plus = 0.0;
  std::vector<double> heat_flux;
  std::vector<double> charge_flux;
  /// sigma_plus + sum_j beta_j (heat_j - mu_j charge_j).
  double consistency = 0.0;
};

/// Landauer-Buttiker entropy production and steady fluxes. Throws
/// NumericalError if the consistency residual exceeds 10 * quad_tol.
LandauerResult landauer(const EbbSpec& spec, const ScatteringFn& scattering, double quad_tol = 1e-8);
LandauerResult landauer(const EbbSpec& spec, double quad_tol = 1e-8);

/// XY chain: coupling J, field lambda, reservoir inverse temperatures
/// beta_left and beta_right, sample inverse temperature beta on [-n, n],
/// whole chain [-m, m].
struct XySpec {
  double J = 1.0;
  double lambda = 0.0;
  double beta_left = 1.0;
  double beta_right = 2.0;
  double beta = 1.5;
  int n = 2;
  int m = 128;

  void validate() const;
};

/// Large-time Renyi density (1 / pi) int_{u-}^{u+} log(1 - sinh(s u db) sinh((1-s) u db) /
/// (cosh(u bL) cosh(u bR))) du, u_pm = (lambda pm J)/2, db = bR - bL.
double xy_e(const XySpec& spec, double s, double quad_tol = 1e-10);

/// (1 / pi) int_{u-}^{u+} u (bL - bR)(tanh(u bL) - tanh(u bR)) du.
double xy_sigma(const XySpec& spec, double quad_tol = 1e-10);

/// Jordan-Wigner one-particle Hamiltonian on [-m, m]: hopping -J/2, on-site -lambda.
/// With `decoupled` the bonds (-n-1, -n) and (n, n+1) are removed.
Eigen::MatrixXd xy_one_particle_hamiltonian(const XySpec& spec, bool decoupled);

/// Finite XY chain at time t, prepared so that e_{mt}(s) can be evaluated for
/// several s: A = e^{-ith} T e^{ith}, B = T with T the blockwise Fermi-Dirac
/// density of the decoupled chain. Throws ValidationError if 2m + 1 > 4096.
class XyFiniteChain {
 public:
  XyFiniteChain(const XySpec& spec, double t);
  double renyi(double s) const { return pair_.renyi(s); }
  double t() const { return t_; }

 private:
  double t_;
  QuasiFreePair pair_;
};

double xy_finite_renyi(const XySpec& spec, double t, double s);

/// Weak-coupling entropy production of the spin-fermion model:
/// (pi/2) sum_ij [n_i n_j / sum_k n_k] (b_i - b_j) sinh(b_i - b_j) / (cosh b_i cosh b_j).
double spin_fermion_sigma2(const std::vector<double>& norms2, const std::vector<double>& betas);

}  // namespace qht
