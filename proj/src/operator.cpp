#include "qht/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "qht/error.hpp"

namespace qht {

HermitianOperator::HermitianOperator() : cache_(std::make_shared<Cache>()) {}

HermitianOperator::HermitianOperator(Matrix entries, Unchecked)
    : m_(std::move(entries)), cache_(std::make_shared<Cache>()) {}

HermitianOperator::HermitianOperator(Matrix entries) : cache_(std::make_shared<Cache>()) {
  if (entries.rows() != entries.cols()) {
    std::ostringstream os;
    os << "operator must be square, got " << entries.rows() << "x" << entries.cols();
    throw ValidationError(os.str());
  }
  const double norm = entries.norm();
  const double defect = (entries - entries.adjoint()).norm();
  if (!std::isfinite(norm)) throw ValidationError("operator has non-finite entries");
  if (defect > kHermitianTol * norm) {
    std::ostringstream os;
    os << "matrix is not Hermitian: ||A - A*||_F = " << defect << " (relative " << defect / norm << ")";
    throw ValidationError(os.str());
  }
  m_ = (entries + entries.adjoint()) / 2.0;
}

HermitianOperator HermitianOperator::from_hermitian_part(const Matrix& entries) {
  return HermitianOperator((entries + entries.adjoint()) / 2.0, Unchecked{});
}

HermitianOperator HermitianOperator::identity(Index n) {
  return HermitianOperator(Matrix::Identity(n, n), Unchecked{});
}

HermitianOperator HermitianOperator::zero(Index n) {
  return HermitianOperator(Matrix::Zero(n, n), Unchecked{});
}

HermitianOperator HermitianOperator::diagonal(const RealVector& d) {
  Matrix m = Matrix::Zero(d.size(), d.size());
  m.diagonal() = d.cast<Complex>();
  return HermitianOperator(std::move(m), Unchecked{});
}

HermitianOperator HermitianOperator::from_eigensystem(const RealVector& values, const Matrix& vectors) {
  return from_hermitian_part(vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint());
}

const Eigensystem& HermitianOperator::eigensystem() const {
  std::call_once(cache_->once, [this] {
    if (m_.size() == 0) return;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_);
    if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    cache_->eig.values = solver.eigenvalues();
    cache_->eig.vectors = solver.eigenvectors();
  });
  return cache_->eig;
}

double HermitianOperator::min_eigenvalue() const { return eigenvalues()(0); }

double HermitianOperator::max_eigenvalue() const { return eigenvalues()(eigenvalues().size() - 1); }

double HermitianOperator::norm() const {
  if (dim() == 0) return 0.0;
  return std::max(std::abs(min_eigenvalue()), std::abs(max_eigenvalue()));
}

bool HermitianOperator::is_real(double tol) const {
  return m_.imag().cwiseAbs().maxCoeff() <= tol * std::max(1.0, m_.cwiseAbs().maxCoeff());
}

HermitianOperator HermitianOperator::conjugated_by(const Matrix& u) const {
  return from_hermitian_part(u * m_ * u.adjoint());
}

HermitianOperator HermitianOperator::operator-() const { return HermitianOperator(-m_, Unchecked{}); }

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.m_ + b.m_, HermitianOperator::Unchecked{});
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.m_ - b.m_, HermitianOperator::Unchecked{});
}

HermitianOperator operator*(double c, const HermitianOperator& a) {
  return HermitianOperator(c * a.m_, HermitianOperator::Unchecked{});
}

double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  // Tr(AB) = sum_ij A_ij B_ji and B_ji = conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

HermitianOperator commutator_i(const HermitianOperator& a, const HermitianOperator& b) {
  const Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  return HermitianOperator::from_hermitian_part(Complex(0.0, -1.0) * c);
}

HermitianOperator SpectralDecomposition::reconstruct() const {
  if (bases.empty()) return HermitianOperator();
  const Index n = bases.front().rows();
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < size(); ++i) m += eigenvalues[i] * projectors[i].matrix();
  return HermitianOperator::from_hermitian_part(m);
}

SpectralDecomposition decompose(const HermitianOperator& a, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw ValidationError("cluster_tol must be positive");
  const Eigensystem& eig = a.eigensystem();
  const Index n = a.dim();
  const double tol = cluster_tol * std::max(1.0, a.norm());

  SpectralDecomposition out;
  out.zero_tol = tol;
  Index start = 0;
  while (start < n) {
    Index end = start + 1;
    while (end < n && eig.values(end) - eig.values(end - 1) <= tol) ++end;
    const Index count = end - start;
    Matrix basis = eig.vectors.middleCols(start, count);
    out.eigenvalues.push_back(eig.values.segment(start, count).mean());
    out.projectors.push_back(HermitianOperator::from_hermitian_part(basis * basis.adjoint()));
    out.bases.push_back(std::move(basis));
    start = end;
  }
  return out;
}

HermitianOperator apply_function(const SpectralDecomposition& d, const std::function<double(double)>& f) {
  if (d.bases.empty()) return HermitianOperator();
  const Index n = d.bases.front().rows();
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double v = f(d.eigenvalues[i]);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "function is not finite at eigenvalue " << d.eigenvalues[i];
      throw NumericalError(os.str());
    }
    m.noalias() += v * (d.bases[i] * d.bases[i].adjoint());
  }
  return HermitianOperator::from_hermitian_part(m);
}

HermitianOperator apply_function(const HermitianOperator& a, const std::function<double(double)>& f,
                                 double cluster_tol) {
  return apply_function(decompose(a, cluster_tol), f);
}

SpectralParts spectral_parts(const HermitianOperator& a, double cluster_tol) {
  const SpectralDecomposition d = decompose(a, cluster_tol);
  const Index n = a.dim();
  Matrix pos = Matrix::Zero(n, n);
  Matrix neg = Matrix::Zero(n, n);
  Matrix supp = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double lambda = d.eigenvalues[i];
    if (std::abs(lambda) <= d.zero_tol) continue;
    const Matrix& p = d.projectors[i].matrix();
    if (lambda > 0) {
      pos += lambda * p;
    } else {
      neg -= lambda * p;
    }
    supp += p;
  }
  SpectralParts parts;
  parts.positive = HermitianOperator::from_hermitian_part(pos);
  parts.negative = HermitianOperator::from_hermitian_part(neg);
  parts.absolute = HermitianOperator::from_hermitian_part(pos + neg);
  parts.support = HermitianOperator::from_hermitian_part(supp);
  return parts;
}

HermitianOperator positive_part(const HermitianOperator& a, double cluster_tol) {
  return spectral_parts(a, cluster_tol).positive;
}

HermitianOperator negative_part(const HermitianOperator& a, double cluster_tol) {
  return spectral_parts(a, cluster_tol).negative;
}

HermitianOperator abs_part(const HermitianOperator& a, double cluster_tol) {
  return spectral_parts(a, cluster_tol).absolute;
}

HermitianOperator support(const HermitianOperator& a, double cluster_tol) {
  return spectral_parts(a, cluster_tol).support;
}

double trace_norm(const HermitianOperator& a) {
  if (a.dim() == 0) return 0.0;
  return a.eigenvalues().cwiseAbs().sum();
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  Matrix k = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return HermitianOperator::from_hermitian_part(k);
}

HermitianOperator embed(const HermitianOperator& local, std::span<const Index> dims,
                        std::span<const Index> sites) {
  Index total = 1;
  for (Index d : dims) {
    if (d < 1) throw ValidationError("tensor factor dimensions must be positive");
    total *= d;
  }
  Index local_dim = 1;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (sites[k] < 0 || sites[k] >= static_cast<Index>(dims.size()))
      throw ValidationError("embed: site index out of range");
    if (k > 0 && sites[k] <= sites[k - 1]) throw ValidationError("embed: sites must be strictly increasing");
    local_dim *= dims[sites[k]];
  }
  if (local.dim() != local_dim) {
    std::ostringstream os;
    os << "embed: local operator has dimension " << local.dim() << ", expected " << local_dim;
    throw ValidationError(os.str());
  }

  std::vector<bool> is_site(dims.size(), false);
  for (Index s : sites) is_site[s] = true;
  const Index rest_dim = total / local_dim;

  // slot[rest * local_dim + loc] = full index
  std::vector<Index> slot(static_cast<std::size_t>(total));
  for (Index full = 0; full < total; ++full) {
    Index rem = full;
    Index loc = 0, loc_stride = 1;
    Index rest = 0, rest_stride = 1;
    for (Index f = static_cast<Index>(dims.size()) - 1; f >= 0; --f) {
      const Index digit = rem % dims[f];
      rem /= dims[f];
      if (is_site[f]) {
        loc += digit * loc_stride;
        loc_stride *= dims[f];
      } else {
        rest += digit * rest_stride;
        rest_stride *= dims[f];
      }
    }
    slot[static_cast<std::size_t>(rest * local_dim + loc)] = full;
  }

  Matrix m = Matrix::Zero(total, total);
  for (Index r = 0; r < rest_dim; ++r) {
    const Index* idx = slot.data() + r * local_dim;
    for (Index i = 0; i < local_dim; ++i)
      for (Index j = 0; j < local_dim; ++j) m(idx[i], idx[j]) = local(i, j);
  }
  return HermitianOperator::from_hermitian_part(m);
}

Matrix unitary_exp(const HermitianOperator& a, double t) {
  const Eigensystem& eig = a.eigensystem();
  const Vector phases = (eig.values * (-t)).unaryExpr([](double x) { return std::polar(1.0, x); });
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

}  // namespace qht
