#include "qht/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qht/error.hpp"

namespace qht {

namespace {

constexpr double kFaithfulTol = 1e-12;
constexpr double kOrderTol = 1e-12;

void require_same_dim(const PositiveFunctional& a, const PositiveFunctional& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "dimension mismatch: " << a.dim() << " vs " << b.dim();
    throw ValidationError(os.str());
  }
}

}  // namespace

PositiveFunctional::PositiveFunctional(HermitianOperator op) : op_(std::move(op)) {
  if (op_.dim() == 0) throw ValidationError("positive functional must have positive dimension");
  const double lo = op_.min_eigenvalue();
  if (lo <= kFaithfulTol * op_.norm()) {
    std::ostringstream os;
    os << "functional is not faithful: minimum eigenvalue " << lo << " (norm " << op_.norm() << ")";
    throw ValidationError(os.str());
  }
  spectrum_ = std::make_shared<const SpectralDecomposition>(decompose(op_));
}

PositiveFunctional PositiveFunctional::normalized(const HermitianOperator& op) {
  const double tr = op.trace();
  if (!(tr > 0)) throw ValidationError("cannot normalise an operator with non-positive trace");
  return PositiveFunctional((1.0 / tr) * op);
}

bool PositiveFunctional::is_state(double tol) const { return std::abs(mass() - 1.0) <= tol; }

const SpectralDecomposition& PositiveFunctional::spectrum() const { return *spectrum_; }

HermitianOperator power(const PositiveFunctional& a, double p) {
  return apply_function(a.spectrum(), [p](double x) { return std::pow(x, p); });
}

HermitianOperator logarithm(const PositiveFunctional& a) {
  return apply_function(a.spectrum(), [](double x) { return std::log(x); });
}

SpectralMeasure SpectralMeasure::from_atoms(std::vector<Atom> atoms, double merge_tol) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.location < r.location; });
  double scale = 1.0;
  for (const Atom& a : atoms) scale = std::max(scale, std::abs(a.location));
  const double tol = merge_tol * scale;

  SpectralMeasure m;
  std::size_t i = 0;
  while (i < atoms.size()) {
    // chain-merge neighbours; location is the weight-averaged position
    double w = atoms[i].weight;
    double wx = atoms[i].weight * atoms[i].location;
    double last = atoms[i].location;
    std::size_t j = i + 1;
    while (j < atoms.size() && atoms[j].location - last <= tol) {
      w += atoms[j].weight;
      wx += atoms[j].weight * atoms[j].location;
      last = atoms[j].location;
      ++j;
    }
    if (w > 0) m.atoms_.push_back({wx / w, w});
    i = j;
  }
  return m;
}

double SpectralMeasure::mass() const {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.weight;
  return total;
}

double SpectralMeasure::laplace(double s) const {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.weight * std::exp(-s * a.location);
  return total;
}

double SpectralMeasure::log_laplace(double s) const {
  double shift = -std::numeric_limits<double>::infinity();
  for (const Atom& a : atoms_)
    if (a.weight > 0) shift = std::max(shift, -s * a.location);
  if (!std::isfinite(shift)) return -std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (const Atom& a : atoms_)
    if (a.weight > 0) total += a.weight * std::exp(-s * a.location - shift);
  return shift + std::log(total);
}

double SpectralMeasure::moment(int k) const {
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.weight * std::pow(a.location, k);
  return total;
}

double SpectralMeasure::mean() const { return moment(1) / mass(); }

double SpectralMeasure::variance() const {
  const double m = mean();
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.weight * (a.location - m) * (a.location - m);
  return total / mass();
}

SpectralMeasure SpectralMeasure::scaled(double c) const {
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) a.location *= c;
  return from_atoms(std::move(atoms), 0.0);
}

double relative_entropy(const PositiveFunctional& nu, const PositiveFunctional& omega) {
  require_same_dim(nu, omega);
  const HermitianOperator diff = logarithm(omega) - logarithm(nu);
  return nu(diff);
}

double renyi_trace(const PositiveFunctional& nu, const PositiveFunctional& omega, double s) {
  return std::exp(renyi_relative_entropy(nu, omega, s));
}

double renyi_relative_entropy(const PositiveFunctional& nu, const PositiveFunctional& omega, double s) {
  require_same_dim(nu, omega);
  // Factor out the spectral radii so that the remaining powers have
  // eigenvalues <= 1 for s in [0, 1] and only overflow for extreme s.
  const double nn = nu.op().norm();
  const double wn = omega.op().norm();
  bool overflow = false;
  const auto scaled_power = [&overflow](const SpectralDecomposition& d, double norm, double p) {
    return apply_function(d, [&overflow, norm, p](double x) {
      const double v = std::pow(x / norm, p);
      if (std::isfinite(v)) return v;
      overflow = true;
      return 0.0;
    });
  };
  const HermitianOperator a = scaled_power(nu.spectrum(), nn, s);
  const HermitianOperator b = scaled_power(omega.spectrum(), wn, 1.0 - s);
  if (overflow) return std::numeric_limits<double>::infinity();
  const double tr = trace_product(a, b);
  const double offset = s * std::log(nn) + (1.0 - s) * std::log(wn);
  if (!std::isfinite(tr)) return std::numeric_limits<double>::infinity();
  if (tr <= 0.0) return -std::numeric_limits<double>::infinity();
  return offset + std::log(tr);
}

SpectralMeasure modular_spectral_measure(const PositiveFunctional& nu, const PositiveFunctional& omega) {
  require_same_dim(nu, omega);
  const SpectralDecomposition& dn = nu.spectrum();
  const SpectralDecomposition& dw = omega.spectrum();
  std::vector<Atom> atoms;
  atoms.reserve(dn.size() * dw.size());
  for (std::size_t a = 0; a < dn.size(); ++a) {
    for (std::size_t b = 0; b < dw.size(); ++b) {
      const double overlap = (dn.bases[a].adjoint() * dw.bases[b]).squaredNorm();
      const double lambda = dn.eigenvalues[a];
      const double mu = dw.eigenvalues[b];
      atoms.push_back({std::log(mu) - std::log(lambda), mu * overlap});
    }
  }
  return SpectralMeasure::from_atoms(std::move(atoms), kDefaultClusterTol);
}

double monotonicity_gap(const PositiveFunctional& nu1, const PositiveFunctional& nu2,
                        const PositiveFunctional& omega1, const PositiveFunctional& omega2, double s) {
  require_same_dim(nu1, nu2);
  require_same_dim(nu1, omega1);
  require_same_dim(nu1, omega2);
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("monotonicity_gap: s must lie in [0, 1]");
  const double dn = (nu1.op() - nu2.op()).min_eigenvalue();
  if (dn < -kOrderTol) {
    std::ostringstream os;
    os << "ordering nu2 <= nu1 violated: min eigenvalue of nu1 - nu2 is " << dn;
    throw ValidationError(os.str());
  }
  const double dw = (omega1.op() - omega2.op()).min_eigenvalue();
  if (dw < -kOrderTol) {
    std::ostringstream os;
    os << "ordering omega2 <= omega1 violated: min eigenvalue of omega1 - omega2 is " << dw;
    throw ValidationError(os.str());
  }
  const HermitianOperator diff = power(nu1, s) - power(nu2, s);
  return trace_product(diff, power(omega1, 1.0 - s)) - trace_product(diff, power(omega2, 1.0 - s));
}

}  // namespace qht
