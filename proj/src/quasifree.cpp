#include "qht/quasifree.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qht/error.hpp"
#include "qht/quadrature.hpp"

namespace qht {

namespace {

constexpr double kUnitarityTol = 1e-8;
constexpr double kTableUnitarityTol = 1e-10;
constexpr Index kMaxChainDim = 4096;

// log(1 + e^y) without overflow
double softplus(double y) { return y > 0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y)); }

RealVector log_odds(const RealVector& x) {
  RealVector out(x.size());
  for (Index i = 0; i < x.size(); ++i) out(i) = std::log(x(i)) - std::log1p(-x(i));
  return out;
}

void check_margin(const RealVector& log_odds, double margin, const char* which) {
  const double cap = std::log((1.0 - margin) / margin);
  for (Index i = 0; i < log_odds.size(); ++i) {
    if (!(std::abs(log_odds(i)) <= cap)) {
      std::ostringstream os;
      const double x = 1.0 / (1.0 + std::exp(-log_odds(i)));
      os << "density " << which << " has eigenvalue " << x << " outside [" << margin << ", " << 1.0 - margin << "]";
      throw ValidationError(os.str());
    }
  }
}

void check_density_spectrum(const RealVector& x, double margin, const char* which) {
  for (Index i = 0; i < x.size(); ++i)
    if (!(x(i) >= margin && x(i) <= 1.0 - margin)) {
      std::ostringstream os;
      os << "density " << which << " has eigenvalue " << x(i) << " outside [" << margin << ", " << 1.0 - margin << "]";
      throw ValidationError(os.str());
    }
}

// vs_jj(k) = -beta_j (eps(k) - mu_j)
RealVector varsigma(const EbbSpec& spec, double k) {
  const double e = lead_energy(k);
  RealVector v(static_cast<Index>(spec.n_leads()));
  for (std::size_t j = 0; j < spec.n_leads(); ++j) v(static_cast<Index>(j)) = -spec.leads[j].beta * (e - spec.leads[j].mu);
  return v;
}

double logistic(double x) { return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

double log_det_integrand(const EbbSpec& spec, double s, const Matrix& sk, double k) {
  const Index n = sk.rows();
  const RealVector vs = varsigma(spec, k);
  Matrix inner(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) inner(i, j) = std::exp(-s * vs(i)) * sk(i, j) * std::exp(s * vs(j));
  inner = inner * sk.adjoint();
  inner -= Matrix::Identity(n, n);
  for (Index i = 0; i < n; ++i) inner.row(i) *= logistic(vs(i));
  inner += Matrix::Identity(n, n);
  const Complex det = inner.partialPivLu().determinant();
  if (!(det.real() > 0) || std::abs(det.imag()) > 1e-8 * std::max(1.0, std::abs(det))) {
    std::ostringstream os;
    os << "determinant " << det.real() << (det.imag() >= 0 ? "+" : "") << det.imag() << "i is not positive at k = " << k;
    throw NumericalError(os.str());
  }
  return std::log(det.real());
}

double xy_ratio_term(double x, double y) {
  // sinh(x) / cosh(y) evaluated through exponentials of nonpositive arguments
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  const double mag = std::exp(ax - ay) * (-std::expm1(-2 * ax)) / (1.0 + std::exp(-2 * ay));
  return x < 0 ? -mag : mag;
}

}  // namespace

double fermi_dirac(double energy, double beta, double mu) { return logistic(-beta * (energy - mu)); }

HermitianOperator fermi_dirac(const HermitianOperator& h, double beta, double mu) {
  if (!(beta > 0)) throw ValidationError("fermi_dirac: beta must be positive");
  return apply_function(h, [beta, mu](double e) { return fermi_dirac(e, beta, mu); });
}

QuasiFreePair::QuasiFreePair(const HermitianOperator& a, const HermitianOperator& b, double margin) {
  if (a.dim() != b.dim()) throw ValidationError("quasi-free densities have different dimensions");
  const Eigensystem& ea = a.eigensystem();
  const Eigensystem& eb = b.eigensystem();
  check_density_spectrum(ea.values, margin, "A");
  check_density_spectrum(eb.values, margin, "B");
  log_odds_a_ = log_odds(ea.values);
  log_odds_b_ = log_odds(eb.values);
  overlap_ = ea.vectors.adjoint() * eb.vectors;
  init(margin);
}

QuasiFreePair QuasiFreePair::from_log_odds(RealVector log_odds_a, RealVector log_odds_b, Matrix overlap,
                                           double margin) {
  if (log_odds_a.size() != overlap.rows() || log_odds_b.size() != overlap.cols())
    throw ValidationError("quasi-free pair: spectra and overlap have inconsistent sizes");
  QuasiFreePair p;
  p.log_odds_a_ = std::move(log_odds_a);
  p.log_odds_b_ = std::move(log_odds_b);
  p.overlap_ = std::move(overlap);
  p.init(margin);
  return p;
}

void QuasiFreePair::init(double margin) {
  check_margin(log_odds_a_, margin, "A");
  check_margin(log_odds_b_, margin, "B");
  log_hole_a_ = 0.0;
  log_hole_b_ = 0.0;
  for (Index i = 0; i < log_odds_a_.size(); ++i) log_hole_a_ -= softplus(log_odds_a_(i));
  for (Index i = 0; i < log_odds_b_.size(); ++i) log_hole_b_ -= softplus(log_odds_b_(i));
}

double QuasiFreePair::renyi(double s) const {
  const Index n = dim();
  const RealVector left = (0.5 * s * log_odds_a_).array().exp();
  const RealVector right = (0.5 * (1.0 - s) * log_odds_b_).array().exp();
  const Matrix g = left.asDiagonal() * overlap_ * right.asDiagonal();
  Matrix m = Matrix::Identity(n, n);
  m.selfadjointView<Eigen::Lower>().rankUpdate(g);
  const Eigen::LLT<Matrix, Eigen::Lower> llt(m);
  if (llt.info() != Eigen::Success) throw NumericalError("quasi-free Renyi: Cholesky factorisation failed");
  double log_det = 0.0;
  const Matrix& l = llt.matrixLLT();
  for (Index i = 0; i < n; ++i) log_det += 2.0 * std::log(l(i, i).real());
  return s * log_hole_a_ + (1.0 - s) * log_hole_b_ + log_det;
}

double quasifree_renyi(const HermitianOperator& a, const HermitianOperator& b, double s, double margin) {
  return QuasiFreePair(a, b, margin).renyi(s);
}

double szego_limit(const std::function<double(double)>& a, const std::function<double(double)>& b, double s,
                   double quad_tol) {
  const auto f = [&](double k) {
    const double x = a(k);
    const double y = b(k);
    if (!(x > 0 && x < 1 && y > 0 && y < 1)) {
      std::ostringstream os;
      os << "symbol values (" << x << ", " << y << ") at k = " << k << " are outside (0, 1)";
      throw ValidationError(os.str());
    }
    return std::log(std::pow(x, s) * std::pow(y, 1 - s) + std::pow(1 - x, s) * std::pow(1 - y, 1 - s));
  };
  return adaptive_simpson(f, 0.0, 2 * std::numbers::pi, quad_tol).value / (2 * std::numbers::pi);
}

HermitianOperator toeplitz_section(const std::function<double(double)>& symbol, Index n, int nodes) {
  if (n < 1) throw ValidationError("toeplitz_section: n must be positive");
  if (nodes < 2 * n) throw ValidationError("toeplitz_section: need at least 2n quadrature nodes");
  std::vector<double> values(static_cast<std::size_t>(nodes));
  for (int l = 0; l < nodes; ++l) values[static_cast<std::size_t>(l)] = symbol(2 * std::numbers::pi * l / nodes);
  std::vector<Complex> coeff(static_cast<std::size_t>(2 * n - 1));
  for (Index m = -(n - 1); m <= n - 1; ++m) {
    Complex c = 0.0;
    for (int l = 0; l < nodes; ++l)
      c += values[static_cast<std::size_t>(l)] * std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(m * l % nodes) / nodes);
    coeff[static_cast<std::size_t>(m + n - 1)] = c / static_cast<double>(nodes);
  }
  Matrix t(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k) t(j, k) = coeff[static_cast<std::size_t>(j - k + n - 1)];
  return HermitianOperator::from_hermitian_part(t);
}

void EbbSpec::validate() const {
  if (leads.empty()) throw ValidationError("EBB model needs at least one lead");
  if (chi.size() != leads.size()) {
    std::ostringstream os;
    os << "EBB model has " << chi.size() << " coupling vectors for " << leads.size() << " leads";
    throw ValidationError(os.str());
  }
  for (std::size_t j = 0; j < chi.size(); ++j) {
    if (chi[j].size() != h_sample.dim()) {
      std::ostringstream os;
      os << "coupling vector " << j << " has dimension " << chi[j].size() << ", sample has " << h_sample.dim();
      throw ValidationError(os.str());
    }
    if (std::abs(chi[j].norm() - 1.0) > 1e-10) {
      std::ostringstream os;
      os << "coupling vector " << j << " has norm " << chi[j].norm() << ", expected 1";
      throw ValidationError(os.str());
    }
    if (!(leads[j].beta > 0)) {
      std::ostringstream os;
      os << "lead " << j << " has non-positive beta " << leads[j].beta;
      throw ValidationError(os.str());
    }
  }
}

Matrix ebb_scattering(const EbbSpec& spec, double k) {
  spec.validate();
  const Index ns = spec.h_sample.dim();
  const Index nl = static_cast<Index>(spec.n_leads());
  Matrix c(ns, nl);
  for (Index j = 0; j < nl; ++j) c.col(j) = spec.chi[static_cast<std::size_t>(j)];
  const double lam2 = spec.lambda * spec.lambda;
  const Complex g = -2.0 * std::polar(1.0, k);
  const Matrix resolvent_inv =
      lead_energy(k) * Matrix::Identity(ns, ns) - spec.h_sample.matrix() - lam2 * g * (c * c.adjoint());
  const Eigen::PartialPivLU<Matrix> lu(resolvent_inv);
  if (lu.rcond() < 1e-13) {
    std::ostringstream os;
    os << "sample resolvent is singular at k = " << k;
    throw NumericalError(os.str());
  }
  const Matrix s = Matrix::Identity(nl, nl) - Complex(0.0, 4.0 * lam2 * std::sin(k)) * (c.adjoint() * lu.solve(c));
  const double defect = (s * s.adjoint() - Matrix::Identity(nl, nl)).norm();
  if (defect > kUnitarityTol) {
    std::ostringstream os;
    os << "scattering matrix at k = " << k << " is not unitary (defect " << defect << ")";
    throw NumericalError(os.str());
  }
  return s;
}

ScatteringFn interpolate_scattering(std::vector<double> k, std::vector<Matrix> table) {
  if (k.size() != table.size() || k.size() < 2) throw ValidationError("scattering table needs at least two rows");
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i > 0 && !(k[i] > k[i - 1])) throw ValidationError("scattering table k values must increase");
    const Matrix& m = table[i];
    if (m.rows() != table[0].rows() || m.cols() != m.rows()) throw ValidationError("scattering table has inconsistent shapes");
    const double defect = (m * m.adjoint() - Matrix::Identity(m.rows(), m.rows())).norm();
    if (defect > kTableUnitarityTol) {
      std::ostringstream os;
      os << "scattering table entry at k = " << k[i] << " is not unitary (defect " << defect << ")";
      throw ValidationError(os.str());
    }
  }
  return [k = std::move(k), table = std::move(table)](double x) -> Matrix {
    if (x <= k.front()) return table.front();
    if (x >= k.back()) return table.back();
    const std::size_t hi = static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), x) - k.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - k[lo]) / (k[hi] - k[lo]);
    const Matrix m = (1.0 - w) * table[lo] + w * table[hi];
    const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
  };
}

double ebb_e(const EbbSpec& spec, double s, const ScatteringFn& scattering, double quad_tol) {
  spec.validate();
  const auto f = [&](double k) {
    if (k <= 0.0 || k >= std::numbers::pi) return 0.0;
    const Matrix sk = scattering(k);
    if (sk.rows() != static_cast<Index>(spec.n_leads())) throw ValidationError("scattering matrix size differs from the number of leads");
    return log_det_integrand(spec, s, sk, k) * std::sin(k) / (2 * std::numbers::pi);
  };
  return adaptive_simpson(f, 0.0, std::numbers::pi, quad_tol).value;
}

double ebb_e(const EbbSpec& spec, double s, double quad_tol) {
  return ebb_e(spec, s, [&spec](double k) { return ebb_scattering(spec, k); }, quad_tol);
}

LandauerResult landauer(const EbbSpec& spec, const ScatteringFn& scattering, double quad_tol) {
  spec.validate();
  const std::size_t n = spec.n_leads();
  // kind 0: entropy production, 1: heat flux of lead j, 2: charge flux of lead j
  const auto integral = [&](int kind, std::size_t lead) {
    const auto f = [&](double k) {
      if (k <= 0.0 || k >= std::numbers::pi) return 0.0;
      const Matrix sk = scattering(k);
      const double e = lead_energy(k);
      const RealVector vs = varsigma(spec, k);
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (kind != 0 && j != lead) continue;
        const double rho_j = logistic(vs(static_cast<Index>(j)));
        for (std::size_t i = 0; i < n; ++i) {
          const Complex amp = sk(static_cast<Index>(j), static_cast<Index>(i)) - (i == j ? 1.0 : 0.0);
          const double tji = std::norm(amp);
          const double diff = rho_j - logistic(vs(static_cast<Index>(i)));
          const double weight = kind == 0 ? vs(static_cast<Index>(j)) : (kind == 1 ? e : 1.0);
          total += tji * diff * weight;
        }
      }
      return total * std::sin(k) / (2 * std::numbers::pi);
    };
    return adaptive_simpson(f, 0.0, std::numbers::pi, quad_tol).value;
  };

  LandauerResult r;
  r.sigma_plus = integral(0, 0);
  double rebuilt = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    r.heat_flux.push_back(integral(1, j));
    r.charge_flux.push_back(integral(2, j));
    rebuilt -= spec.leads[j].beta * (r.heat_flux.back() - spec.leads[j].mu * r.charge_flux.back());
  }
  r.consistency = r.sigma_plus - rebuilt;
  if (std::abs(r.consistency) > 10 * quad_tol) {
    std::ostringstream os;
    os << "Landauer entropy production " << r.sigma_plus << " disagrees with the flux expression " << rebuilt;
    throw NumericalError(os.str());
  }
  return r;
}

LandauerResult landauer(const EbbSpec& spec, double quad_tol) {
  return landauer(spec, [&spec](double k) { return ebb_scattering(spec, k); }, quad_tol);
}

void XySpec::validate() const {
  if (J == 0.0) throw ValidationError("XY chain needs J != 0");
  if (!(beta_left > 0 && beta_right > 0 && beta > 0)) throw ValidationError("XY chain inverse temperatures must be positive");
  if (n < 0 || m <= n) {
    std::ostringstream os;
    os << "XY chain needs 0 <= n < m, got n = " << n << ", m = " << m;
    throw ValidationError(os.str());
  }
}

double xy_e(const XySpec& spec, double s, double quad_tol) {
  if (spec.J == 0.0) throw ValidationError("XY chain needs J != 0");
  const double db = spec.beta_right - spec.beta_left;
  const double lo = 0.5 * (spec.lambda - spec.J);
  const double hi = 0.5 * (spec.lambda + spec.J);
  const auto f = [&](double u) {
    const double ratio = xy_ratio_term(s * u * db, u * spec.beta_left) * xy_ratio_term((1 - s) * u * db, u * spec.beta_right);
    const double arg = 1.0 - ratio;
    if (!(arg > 0)) {
      std::ostringstream os;
      os << "XY integrand has non-positive logarithm argument " << arg << " at u = " << u;
      throw NumericalError(os.str());
    }
    return std::log(arg);
  };
  return adaptive_simpson(f, lo, hi, quad_tol).value / std::numbers::pi;
}

double xy_sigma(const XySpec& spec, double quad_tol) {
  if (spec.J == 0.0) throw ValidationError("XY chain needs J != 0");
  const double bl = spec.beta_left;
  const double br = spec.beta_right;
  const auto f = [&](double u) { return u * (bl - br) * (std::tanh(u * bl) - std::tanh(u * br)); };
  return adaptive_simpson(f, 0.5 * (spec.lambda - spec.J), 0.5 * (spec.lambda + spec.J), quad_tol).value /
         std::numbers::pi;
}

Eigen::MatrixXd xy_one_particle_hamiltonian(const XySpec& spec, bool decoupled) {
  spec.validate();
  const Index dim = 2 * static_cast<Index>(spec.m) + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) h(i, i) = -spec.lambda;
  const Index cut_left = spec.m - spec.n - 1;  // bond (-n-1, -n)
  const Index cut_right = spec.m + spec.n;     // bond (n, n+1)
  for (Index i = 0; i + 1 < dim; ++i) {
    if (decoupled && (i == cut_left || i == cut_right)) continue;
    h(i, i + 1) = h(i + 1, i) = -0.5 * spec.J;
  }
  return h;
}

XyFiniteChain::XyFiniteChain(const XySpec& spec, double t)
    : t_(t), pair_([&] {
        spec.validate();
        const Index dim = 2 * static_cast<Index>(spec.m) + 1;
        if (dim > kMaxChainDim) {
          std::ostringstream os;
          os << "XY chain one-particle dimension " << dim << " exceeds " << kMaxChainDim;
          throw ValidationError(os.str());
        }
        // eigenbasis of the decoupled chain, block by block so that equal
        // reservoir spectra cannot mix
        const Eigen::MatrixXd h0 = xy_one_particle_hamiltonian(spec, true);
        Eigen::MatrixXd v0 = Eigen::MatrixXd::Zero(dim, dim);
        RealVector kappa(dim);
        const Index left = spec.m - spec.n;
        const Index mid = 2 * static_cast<Index>(spec.n) + 1;
        const Index starts[3] = {0, left, left + mid};
        const Index sizes[3] = {left, mid, left};
        const double betas[3] = {spec.beta_left, spec.beta, spec.beta_right};
        for (int b = 0; b < 3; ++b) {
          const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h0.block(starts[b], starts[b], sizes[b], sizes[b]));
          v0.block(starts[b], starts[b], sizes[b], sizes[b]) = es.eigenvectors();
          kappa.segment(starts[b], sizes[b]) = betas[b] * es.eigenvalues();
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(xy_one_particle_hamiltonian(spec, false));
        const Eigen::MatrixXd r = v0.transpose() * full.eigenvectors();
        Eigen::VectorXcd phase(dim);
        for (Index i = 0; i < dim; ++i) phase(i) = std::polar(1.0, t * full.eigenvalues()(i));
        // W = V0^T e^{ith} V0 is the overlap of the eigenbases of A and B
        const Matrix w = r.cast<Complex>() * phase.asDiagonal() * r.transpose().cast<Complex>();
        return QuasiFreePair::from_log_odds(-kappa, -kappa, w);
      }()) {}

double xy_finite_renyi(const XySpec& spec, double t, double s) { return XyFiniteChain(spec, t).renyi(s); }

double spin_fermion_sigma2(const std::vector<double>& norms2, const std::vector<double>& betas) {
  if (norms2.size() != betas.size() || norms2.empty())
    throw ValidationError("spin-fermion: need one coupling norm per inverse temperature");
  double total_norm = 0.0;
  for (std::size_t i = 0; i < norms2.size(); ++i) {
    if (!(norms2[i] >= 0)) throw ValidationError("spin-fermion: coupling norms must be nonnegative");
    if (!(betas[i] > 0)) throw ValidationError("spin-fermion: inverse temperatures must be positive");
    total_norm += norms2[i];
  }
  if (!(total_norm > 0)) throw ValidationError("spin-fermion: all coupling norms are zero");
  double sum = 0.0;
  for (std::size_t i = 0; i < norms2.size(); ++i)
    for (std::size_t j = 0; j < norms2.size(); ++j) {
      const double d = betas[i] - betas[j];
      sum += norms2[i] * norms2[j] / total_norm * d * std::sinh(d) / (std::cosh(betas[i]) * std::cosh(betas[j]));
    }
  return 0.5 * std::numbers::pi * sum;
}

}  // namespace qht
