#pragma once

#include <optional>
#include <vector>

#include "qht/operator.hpp"
#include "qht/state.hpp"

namespace qht {

/// Hamiltonian H and faithful initial state omega (trace one). If tri_basis
/// (a unitary whose columns form the basis) is set, H and omega must have
/// real matrix elements in that basis.
class FiniteSystem {
 public:
  FiniteSystem(HermitianOperator h, PositiveFunctional omega, std::optional<Matrix> tri_basis = std::nullopt);

  const HermitianOperator& hamiltonian() const { return h_; }
  const PositiveFunctional& state() const { return omega_; }
  const std::optional<Matrix>& tri_basis() const { return tri_basis_; }
  Index dim() const { return h_.dim(); }
  /// exp(-itH).
  Matrix propagator(double t) const { return unitary_exp(h_, t); }

 private:
  HermitianOperator h_;
  PositiveFunctional omega_;
  std::optional<Matrix> tri_basis_;
};

/// omega_t = e^{-itH} omega e^{itH}.
PositiveFunctional evolve(const FiniteSystem& sys, double t);

/// tau^t(A) = e^{itH} A e^{-itH}.
HermitianOperator heisenberg(const FiniteSystem& sys, const HermitianOperator& a, double t);

/// S = -log omega.
HermitianOperator entropy_observable(const FiniteSystem& sys);

/// sigma = -i[H, log omega].
HermitianOperator entropy_production_observable(const FiniteSystem& sys);

/// omega(Sigma^t), Sigma^t = (S_t - S)/t with S_t = -log omega_{-t}.
double mean_entropy_production(const FiniteSystem& sys, double t);

struct FcsDistribution {
  double t = 0.0;
  SpectralMeasure measure;
  /// Total weight minus one before renormalisation.
  double mass_deviation = 0.0;
};

/// Two-time measurement statistics of phi = (alpha' - alpha)/t for the
/// entropy observable.
FcsDistribution fcs_distribution(const FiniteSystem& sys, double t);

/// e_t(s) = log Tr omega_t^s omega^{1-s}.
double renyi_functional(const FiniteSystem& sys, double t, double s);

/// int_0^t omega(tau^u(A)) du by composite Simpson with panel doubling.
double expectation_integral(const FiniteSystem& sys, const HermitianOperator& a, double t, double tol = 1e-8);

struct Reservoir {
  HermitianOperator h;
  HermitianOperator n;
  double beta = 1.0;
  double mu = 0.0;
};

struct OpenSystemSpec {
  HermitianOperator h_sample;
  std::vector<Reservoir> reservoirs;
  /// couplings[j] acts on sample (x) reservoir j.
  std::vector<HermitianOperator> couplings;
};

struct OpenSystem {
  FiniteSystem system;
  /// log dim_S + sum_j (beta_j (H_j - mu_j N_j) + log Z_j), in the full space.
  HermitianOperator entropy;
  std::vector<HermitianOperator> h_res;     // H_j embedded
  std::vector<HermitianOperator> n_res;     // N_j embedded
  std::vector<HermitianOperator> heat_flux;    // Phi_j = -i[V, H_j]
  std::vector<HermitianOperator> charge_flux;  // J_j = -i[V, N_j]
  HermitianOperator coupling;               // V = sum_j V_j
};

/// Sample in the chaotic state 1/dim_S, reservoirs in their grand canonical
/// states. Throws ValidationError on dimension mismatch, [H_j, N_j] != 0
/// (beyond 1e-10) or beta_j <= 0.
OpenSystem build_open_system(const OpenSystemSpec& spec);

/// -sum_j beta_j (Phi_j - mu_j J_j).
HermitianOperator entropy_flux(const OpenSystemSpec& spec, const OpenSystem& sys);

struct JointAtom {
  std::vector<double> location;
  double weight = 0.0;
};

/// Joint two-time measurement of a commuting family: atoms at
/// (alpha' - alpha)/t with weight Tr(P_alpha' U P_alpha omega P_alpha U*),
/// U = e^{-itH}. Throws ValidationError if two observables do not commute.
std::vector<JointAtom> joint_fcs(const FiniteSystem& sys, const std::vector<HermitianOperator>& observables, double t);

struct ArrowPoint {
  double t = 0.0;
  double min_error = 0.0;            // D(omega_t, omega_{-t})
  double min_error_shifted = 0.0;    // D(omega_{2t}, omega)
  double exponent = 0.0;             // log(D) / 2t
  double lower_bound = 0.0;          // modular lower bound for (omega_{2t}, omega)
  double upper_bound = 0.0;          // min_s Tr omega_{2t}^s omega^{1-s}
  double lower_rate = 0.0;           // log(lower_bound) / 2t
  double renyi_rate = 0.0;           // min_s e_{2t}(s) / 2t
  double argmin_s = 0.0;
};

/// Arrow-of-time test at time t. Throws NumericalError if the two unitarily
/// equivalent minimal errors differ by more than 1e-10.
ArrowPoint arrow_min_error(const FiniteSystem& sys, double t);
std::vector<ArrowPoint> arrow_exponent_estimate(const FiniteSystem& sys, const std::vector<double>& times);

}  // namespace qht
