#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qht {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative eigenvalue clustering tolerance (scaled by max(1, ||A||)).
inline constexpr double kDefaultClusterTol = 1e-10;
/// Relative Hermiticity defect accepted (and removed) on construction.
inline constexpr double kHermitianTol = 1e-12;

/// Raw eigenpairs, eigenvalues ascending, eigenvectors as orthonormal columns.
struct Eigensystem {
  RealVector values;
  Matrix vectors;
};

/// Dense complex Hermitian matrix with a lazily computed, shared eigensystem.
///
/// Instances are immutable. Copies share the eigensystem cache, which is
/// filled at most once (std::call_once), so a HermitianOperator can be read
/// from several threads.
class HermitianOperator {
 public:
  HermitianOperator();

  /// Checks ||A - A*||_F <= kHermitianTol * ||A||_F and stores (A + A*)/2.
  /// Throws ValidationError with the defect norm otherwise.
  explicit HermitianOperator(Matrix entries);

  /// Stores (A + A*)/2 without checking. For internally computed operators
  /// that are Hermitian in exact arithmetic (commutators, conjugations).
  static HermitianOperator from_hermitian_part(const Matrix& entries);
  static HermitianOperator identity(Index n);
  static HermitianOperator zero(Index n);
  static HermitianOperator diagonal(const RealVector& d);
  /// V diag(values) V*, with V assumed unitary.
  static HermitianOperator from_eigensystem(const RealVector& values, const Matrix& vectors);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  const Eigensystem& eigensystem() const;
  const RealVector& eigenvalues() const { return eigensystem().values; }
  double min_eigenvalue() const;
  double max_eigenvalue() const;
  /// Operator norm, max |lambda|.
  double norm() const;
  double trace() const { return m_.trace().real(); }
  bool is_real(double tol) const;

  /// U A U*.
  HermitianOperator conjugated_by(const Matrix& u) const;

  HermitianOperator operator-() const;
  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double c, const HermitianOperator& a);

 private:
  struct Cache {
    std::once_flag once;
    Eigensystem eig;
  };
  struct Unchecked {};
  HermitianOperator(Matrix entries, Unchecked);

  Matrix m_;
  std::shared_ptr<Cache> cache_;
};

/// Re Tr(AB) in O(n^2).
double trace_product(const HermitianOperator& a, const HermitianOperator& b);

/// -i[A, B], Hermitian for Hermitian A, B.
HermitianOperator commutator_i(const HermitianOperator& a, const HermitianOperator& b);

/// Spectral resolution A = sum_i lambda_i P_i with clustered eigenvalues.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;             // distinct, ascending
  std::vector<HermitianOperator> projectors;   // orthogonal projections
  std::vector<Matrix> bases;                   // orthonormal columns spanning ran P_i
  double zero_tol = 0.0;                       // absolute tolerance used for |lambda| == 0

  std::size_t size() const { return eigenvalues.size(); }
  Index rank(std::size_t i) const { return bases[i].cols(); }
  HermitianOperator reconstruct() const;
};

/// Eigenvalues closer than cluster_tol * max(1, ||A||) (chained through
/// neighbours) merge into their mean with the summed projector.
SpectralDecomposition decompose(const HermitianOperator& a, double cluster_tol = kDefaultClusterTol);

/// sum_i f(lambda_i) P_i. Throws NumericalError naming the eigenvalue if f is
/// not finite there.
HermitianOperator apply_function(const HermitianOperator& a, const std::function<double(double)>& f,
                                 double cluster_tol = kDefaultClusterTol);
HermitianOperator apply_function(const SpectralDecomposition& d, const std::function<double(double)>& f);

struct SpectralParts {
  HermitianOperator positive;
  HermitianOperator negative;
  HermitianOperator absolute;
  HermitianOperator support;
};

/// A_+, A_-, |A| and the support projection from a single decomposition.
/// Clusters with |lambda| <= cluster_tol * max(1, ||A||) count as zero.
SpectralParts spectral_parts(const HermitianOperator& a, double cluster_tol = kDefaultClusterTol);
HermitianOperator positive_part(const HermitianOperator& a, double cluster_tol = kDefaultClusterTol);
HermitianOperator negative_part(const HermitianOperator& a, double cluster_tol = kDefaultClusterTol);
HermitianOperator abs_part(const HermitianOperator& a, double cluster_tol = kDefaultClusterTol);
HermitianOperator support(const HermitianOperator& a, double cluster_tol = kDefaultClusterTol);

/// Tr|A|.
double trace_norm(const HermitianOperator& a);

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

/// Places `local`, acting on the tensor factors listed in `sites` (strictly
/// increasing), into the full product space with factor dimensions `dims`.
/// Factor 0 is the most significant index.
HermitianOperator embed(const HermitianOperator& local, std::span<const Index> dims,
                        std::span<const Index> sites);

/// exp(-i t A) assembled from the eigensystem.
Matrix unitary_exp(const HermitianOperator& a, double t);

}  // namespace qht
