#include "qht/fcs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "qht/error.hpp"
#include "qht/quadrature.hpp"
#include "qht/testing.hpp"

namespace qht {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kTriTol = 1e-10;
constexpr double kCommuteTol = 1e-10;
constexpr double kArrowTol = 1e-10;

void require_real_in(const Matrix& basis, const HermitianOperator& a, const char* what) {
  const Matrix rep = basis.adjoint() * a.matrix() * basis;
  const double imag = rep.imag().cwiseAbs().maxCoeff();
  if (imag > kTriTol * std::max(1.0, rep.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << what << " is not real in the time-reversal basis (max imaginary part " << imag << ")";
    throw ValidationError(os.str());
  }
}

bool commutes(const HermitianOperator& a, const HermitianOperator& b, double tol) {
  const Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  return c.norm() <= tol * std::max(1.0, a.matrix().norm() * b.matrix().norm());
}

struct Block {
  std::vector<double> values;
  Matrix basis;
};

}  // namespace

FiniteSystem::FiniteSystem(HermitianOperator h, PositiveFunctional omega, std::optional<Matrix> tri_basis)
    : h_(std::move(h)), omega_(std::move(omega)), tri_basis_(std::move(tri_basis)) {
  if (h_.dim() != omega_.dim()) {
    std::ostringstream os;
    os << "Hamiltonian has dimension " << h_.dim() << " but the state has dimension " << omega_.dim();
    throw ValidationError(os.str());
  }
  if (!omega_.is_state(kStateTol)) {
    std::ostringstream os;
    os << "initial state must have trace 1, got " << omega_.mass();
    throw ValidationError(os.str());
  }
  if (tri_basis_) {
    const Matrix& u = *tri_basis_;
    if (u.rows() != dim() || u.cols() != dim() ||
        (u.adjoint() * u - Matrix::Identity(dim(), dim())).norm() > 1e-10)
      throw ValidationError("time-reversal basis must be a unitary of the system dimension");
    require_real_in(u, h_, "Hamiltonian");
    require_real_in(u, omega_.op(), "initial state");
  }
}

PositiveFunctional evolve(const FiniteSystem& sys, double t) {
  return PositiveFunctional(sys.state().op().conjugated_by(sys.propagator(t)));
}

HermitianOperator heisenberg(const FiniteSystem& sys, const HermitianOperator& a, double t) {
  return a.conjugated_by(sys.propagator(-t));
}

HermitianOperator entropy_observable(const FiniteSystem& sys) { return -logarithm(sys.state()); }

HermitianOperator entropy_production_observable(const FiniteSystem& sys) {
  return commutator_i(sys.hamiltonian(), logarithm(sys.state()));
}

double mean_entropy_production(const FiniteSystem& sys, double t) {
  if (!(t > 0)) throw ValidationError("mean_entropy_production: t must be positive");
  const HermitianOperator s = entropy_observable(sys);
  const HermitianOperator s_t = -logarithm(evolve(sys, -t));
  return sys.state()(s_t - s) / t;
}

FcsDistribution fcs_distribution(const FiniteSystem& sys, double t) {
  if (!(t > 0)) throw ValidationError("fcs_distribution: t must be positive");
  const SpectralDecomposition& d = sys.state().spectrum();
  const Matrix u = sys.propagator(t);
  std::vector<Atom> atoms;
  atoms.reserve(d.size() * d.size());
  for (std::size_t a = 0; a < d.size(); ++a) {
    const Matrix moved = u * d.bases[a];
    const double alpha = -std::log(d.eigenvalues[a]);
    for (std::size_t b = 0; b < d.size(); ++b) {
      const double alpha_next = -std::log(d.eigenvalues[b]);
      const double w = d.eigenvalues[a] * (d.bases[b].adjoint() * moved).squaredNorm();
      atoms.push_back({(alpha_next - alpha) / t, w});
    }
  }
  FcsDistribution out;
  out.t = t;
  double mass = 0.0;
  for (const Atom& a : atoms) mass += a.weight;
  out.mass_deviation = mass - 1.0;
  for (Atom& a : atoms) a.weight /= mass;
  out.measure = SpectralMeasure::from_atoms(std::move(atoms), kDefaultClusterTol);
  return out;
}

double renyi_functional(const FiniteSystem& sys, double t, double s) {
  if (t == 0.0) return 0.0;
  return renyi_relative_entropy(evolve(sys, t), sys.state(), s);
}

double expectation_integral(const FiniteSystem& sys, const HermitianOperator& a, double t, double tol) {
  // omega(tau^u(A)) = sum_{jk} w_jk a_kj e^{iu(E_k - E_j)} in the eigenbasis of H
  const Eigensystem& es = sys.hamiltonian().eigensystem();
  const Matrix w = es.vectors.adjoint() * sys.state().op().matrix() * es.vectors;
  const Matrix b = es.vectors.adjoint() * a.matrix() * es.vectors;
  const RealVector& e = es.values;
  const Index n = e.size();
  const auto f = [&](double u) {
    Complex total = 0.0;
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) total += w(j, k) * b(k, j) * std::polar(1.0, u * (e(k) - e(j)));
    return total.real();
  };
  if (t == 0.0) return 0.0;
  return composite_simpson(f, 0.0, t, tol).value;
}

OpenSystem build_open_system(const OpenSystemSpec& spec) {
  const std::size_t m = spec.reservoirs.size();
  if (spec.couplings.size() != m) {
    std::ostringstream os;
    os << "got " << spec.couplings.size() << " couplings for " << m << " reservoirs";
    throw ValidationError(os.str());
  }
  std::vector<Index> dims{spec.h_sample.dim()};
  for (std::size_t j = 0; j < m; ++j) {
    const Reservoir& r = spec.reservoirs[j];
    if (r.h.dim() != r.n.dim()) throw ValidationError("reservoir H_j and N_j dimensions differ");
    if (!(r.beta > 0)) {
      std::ostringstream os;
      os << "reservoir " << j << " has non-positive beta " << r.beta;
      throw ValidationError(os.str());
    }
    if (!commutes(r.h, r.n, kCommuteTol)) {
      std::ostringstream os;
      os << "reservoir " << j << ": H_j and N_j do not commute";
      throw ValidationError(os.str());
    }
    if (spec.couplings[j].dim() != spec.h_sample.dim() * r.h.dim()) {
      std::ostringstream os;
      os << "coupling " << j << " has dimension " << spec.couplings[j].dim() << ", expected "
         << spec.h_sample.dim() * r.h.dim();
      throw ValidationError(os.str());
    }
    dims.push_back(r.h.dim());
  }
  Index total = 1;
  for (Index d : dims) total *= d;

  const std::array<Index, 1> sample_site{0};
  HermitianOperator h = embed(spec.h_sample, dims, sample_site);
  HermitianOperator v = HermitianOperator::zero(total);
  Matrix state = Matrix::Identity(spec.h_sample.dim(), spec.h_sample.dim()) / static_cast<double>(spec.h_sample.dim());
  double entropy_shift = std::log(static_cast<double>(spec.h_sample.dim()));
  HermitianOperator entropy = HermitianOperator::zero(total);
  std::vector<HermitianOperator> h_res, n_res;

  for (std::size_t j = 0; j < m; ++j) {
    const Reservoir& r = spec.reservoirs[j];
    const std::array<Index, 1> site{static_cast<Index>(j + 1)};
    const std::array<Index, 2> pair{0, static_cast<Index>(j + 1)};
    h_res.push_back(embed(r.h, dims, site));
    n_res.push_back(embed(r.n, dims, site));
    h = h + h_res.back();
    const HermitianOperator vj = embed(spec.couplings[j], dims, pair);
    h = h + vj;
    v = v + vj;

    // grand canonical state, shifted by the ground energy for stability
    const HermitianOperator k = r.beta * (r.h - r.mu * r.n);
    const double k0 = k.min_eigenvalue();
    const HermitianOperator boltz = apply_function(k, [k0](double x) { return std::exp(-(x - k0)); });
    const double z_shifted = boltz.trace();
    const double log_z = std::log(z_shifted) - k0;
    state = Eigen::kroneckerProduct(state, boltz.matrix() / z_shifted).eval();
    entropy = entropy + embed(k, dims, site);
    entropy_shift += log_z;
  }
  entropy = entropy + entropy_shift * HermitianOperator::identity(total);

  OpenSystem out{FiniteSystem(h, PositiveFunctional(HermitianOperator::from_hermitian_part(state))),
                 entropy, h_res, n_res, {}, {}, v};
  for (std::size_t j = 0; j < m; ++j) {
    out.heat_flux.push_back(commutator_i(v, h_res[j]));
    out.charge_flux.push_back(commutator_i(v, n_res[j]));
  }
  return out;
}

HermitianOperator entropy_flux(const OpenSystemSpec& spec, const OpenSystem& sys) {
  HermitianOperator total = HermitianOperator::zero(sys.system.dim());
  for (std::size_t j = 0; j < spec.reservoirs.size(); ++j) {
    const Reservoir& r = spec.reservoirs[j];
    total = total - r.beta * (sys.heat_flux[j] - r.mu * sys.charge_flux[j]);
  }
  return total;
}

std::vector<JointAtom> joint_fcs(const FiniteSystem& sys, const std::vector<HermitianOperator>& observables,
                                 double t) {
  if (!(t > 0)) throw ValidationError("joint_fcs: t must be positive");
  if (observables.empty()) throw ValidationError("joint_fcs: need at least one observable");
  for (std::size_t i = 0; i < observables.size(); ++i) {
    if (observables[i].dim() != sys.dim()) throw ValidationError("joint_fcs: observable dimension mismatch");
    for (std::size_t j = i + 1; j < observables.size(); ++j)
      if (!commutes(observables[i], observables[j], kCommuteTol)) {
        std::ostringstream os;
        os << "joint_fcs: observables " << i << " and " << j << " do not commute";
        throw ValidationError(os.str());
      }
  }

  // refine the joint spectral subspaces one observable at a time
  std::vector<Block> blocks{{{}, Matrix::Identity(sys.dim(), sys.dim())}};
  for (const HermitianOperator& a : observables) {
    const double scale = std::max(1.0, a.norm());
    std::vector<Block> next;
    for (const Block& b : blocks) {
      const HermitianOperator restricted = HermitianOperator::from_hermitian_part(b.basis.adjoint() * a.matrix() * b.basis);
      const SpectralDecomposition d = decompose(restricted, kDefaultClusterTol * scale / std::max(1.0, restricted.norm()));
      for (std::size_t c = 0; c < d.size(); ++c) {
        Block nb{b.values, b.basis * d.bases[c]};
        nb.values.push_back(d.eigenvalues[c]);
        next.push_back(std::move(nb));
      }
    }
    blocks = std::move(next);
  }

  const Matrix u = sys.propagator(t);
  const Matrix& omega = sys.state().op().matrix();
  const std::size_t k = observables.size();
  std::vector<JointAtom> atoms;
  for (const Block& from : blocks) {
    const Matrix reduced = from.basis.adjoint() * omega * from.basis;
    const Matrix moved = u * from.basis;
    for (const Block& to : blocks) {
      const Matrix amp = to.basis.adjoint() * moved;
      const double w = (amp * reduced * amp.adjoint()).trace().real();
      if (w < -1e-12) {
        std::ostringstream os;
        os << "joint_fcs: negative weight " << w;
        throw NumericalError(os.str());
      }
      JointAtom atom;
      atom.location.resize(k);
      for (std::size_t i = 0; i < k; ++i) atom.location[i] = (to.values[i] - from.values[i]) / t;
      atom.weight = std::max(0.0, w);
      atoms.push_back(std::move(atom));
    }
  }

  // merge coinciding locations
  std::sort(atoms.begin(), atoms.end(), [](const JointAtom& a, const JointAtom& b) { return a.location < b.location; });
  double scale = 1.0;
  for (const JointAtom& a : atoms)
    for (double x : a.location) scale = std::max(scale, std::abs(x));
  const double tol = kDefaultClusterTol * scale;
  std::vector<JointAtom> merged;
  for (JointAtom& a : atoms) {
    if (a.weight <= 0.0) continue;
    if (!merged.empty()) {
      bool same = true;
      for (std::size_t i = 0; i < k && same; ++i) same = std::abs(merged.back().location[i] - a.location[i]) <= tol;
      if (same) {
        merged.back().weight += a.weight;
        continue;
      }
    }
    merged.push_back(std::move(a));
  }
  return merged;
}

ArrowPoint arrow_min_error(const FiniteSystem& sys, double t) {
  if (!(t > 0)) throw ValidationError("arrow_min_error: t must be positive");
  const PositiveFunctional fwd = evolve(sys, t);
  const PositiveFunctional bwd = evolve(sys, -t);
  const PositiveFunctional twice = evolve(sys, 2 * t);

  ArrowPoint p;
  p.t = t;
  p.min_error = optimal_test(bwd, fwd).min_error;
  p.min_error_shifted = optimal_test(sys.state(), twice).min_error;
  if (std::abs(p.min_error - p.min_error_shifted) > kArrowTol) {
    std::ostringstream os;
    os << "D(omega_t, omega_-t) = " << p.min_error << " differs from D(omega_2t, omega) = " << p.min_error_shifted;
    throw NumericalError(os.str());
  }
  p.exponent = std::log(p.min_error) / (2 * t);
  p.lower_bound = modular_lower_bound(twice, sys.state());
  p.lower_rate = std::log(p.lower_bound) / (2 * t);

  // e_{2t} is convex on [0, 1] and vanishes at both ends
  const auto e = [&](double s) { return renyi_relative_entropy(twice, sys.state(), s); };
  MinimizeResult m = golden_section_minimize(e, 0.0, 1.0, 1e-10);
  if (m.value > 0.0) m = {0.0, 0.0};
  p.argmin_s = m.argmin;
  p.renyi_rate = m.value / (2 * t);
  p.upper_bound = std::exp(m.value);
  return p;
}

std::vector<ArrowPoint> arrow_exponent_estimate(const FiniteSystem& sys, const std::vector<double>& times) {
  std::vector<ArrowPoint> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(arrow_min_error(sys, t));
  return out;
}

}  // namespace qht
