#include "qht/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "qht/error.hpp"

namespace qht {

namespace {

void require_size(double qubits, const char* what) {
  if (qubits > kMaxQubits + 1e-12) {
    std::ostringstream os;
    os << what << ": " << qubits << " qubits exceeds the cap of " << kMaxQubits;
    throw ValidationError(os.str());
  }
}

Index ipow(Index base, int exp) {
  Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

void Interaction::validate() const {
  if (site_dim < 1) throw ValidationError("interaction site dimension must be positive");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const InteractionTerm& t = terms[i];
    if (t.range < 1) {
      std::ostringstream os;
      os << "interaction term " << i << " has range " << t.range;
      throw ValidationError(os.str());
    }
    if (t.local.dim() != ipow(site_dim, t.range)) {
      std::ostringstream os;
      os << "interaction term " << i << " has dimension " << t.local.dim() << ", expected " << site_dim << "^"
         << t.range;
      throw ValidationError(os.str());
    }
  }
}

int Interaction::max_range() const {
  int r = 0;
  for (const auto& t : terms) r = std::max(r, t.range);
  return r;
}

Interaction difference(const Interaction& phi, const Interaction& psi) {
  if (phi.site_dim != psi.site_dim) throw ValidationError("interactions have different site dimensions");
  Interaction out{phi.site_dim, phi.terms};
  for (const auto& t : psi.terms) out.terms.push_back({t.range, -t.local});
  return out;
}

std::pair<PositiveFunctional, PositiveFunctional> iid_pair(const PositiveFunctional& nu, const PositiveFunctional& omega,
                                                           int n) {
  if (n < 1) throw ValidationError("iid_pair: n must be at least 1");
  if (nu.dim() != omega.dim()) throw ValidationError("iid_pair: dimension mismatch");
  require_size(n * std::log2(static_cast<double>(nu.dim())), "iid_pair");
  HermitianOperator a = nu.op();
  HermitianOperator b = omega.op();
  for (int k = 1; k < n; ++k) {
    a = kron(a, nu.op());
    b = kron(b, omega.op());
  }
  return {PositiveFunctional(a), PositiveFunctional(b)};
}

HermitianOperator chain_hamiltonian(const Interaction& phi, int sites) {
  phi.validate();
  if (sites < 1) throw ValidationError("chain needs at least one site");
  require_size(sites * std::log2(static_cast<double>(phi.site_dim)), "chain_hamiltonian");
  const std::vector<Index> dims(static_cast<std::size_t>(sites), phi.site_dim);
  const Index total = ipow(phi.site_dim, sites);
  Matrix h = Matrix::Zero(total, total);
  for (const auto& term : phi.terms) {
    std::vector<Index> support(static_cast<std::size_t>(term.range));
    for (int x = 0; x + term.range <= sites; ++x) {
      std::iota(support.begin(), support.end(), static_cast<Index>(x));
      h += embed(term.local, dims, support).matrix();
    }
  }
  return HermitianOperator::from_hermitian_part(h);
}

HermitianOperator box_hamiltonian(const Interaction& phi, int n) {
  if (n < 0) throw ValidationError("box half-width must be nonnegative");
  return chain_hamiltonian(phi, 2 * n + 1);
}

PositiveFunctional gibbs_state(const Interaction& phi, int n) {
  const HermitianOperator h = box_hamiltonian(phi, n);
  const double e0 = h.min_eigenvalue();
  return PositiveFunctional::normalized(apply_function(h, [e0](double x) { return std::exp(-(x - e0)); }));
}

double pressure(const Interaction& phi, int n) {
  const HermitianOperator h = box_hamiltonian(phi, n);
  const RealVector& ev = h.eigenvalues();
  const double e0 = ev.minCoeff();
  double z = 0.0;
  for (Index i = 0; i < ev.size(); ++i) z += std::exp(-(ev(i) - e0));
  return (std::log(z) - e0) / (2 * n + 1);
}

double renyi_density(const Interaction& phi, const Interaction& psi, int n, double s) {
  return renyi_relative_entropy(gibbs_state(phi, n), gibbs_state(psi, n), s) / (2 * n + 1);
}

double triple_norm(const Interaction& phi, int n) {
  phi.validate();
  const int sites = 2 * n + 1;
  std::map<int, Matrix> grouped;
  for (const auto& t : phi.terms) {
    auto [it, fresh] = grouped.try_emplace(t.range, t.local.matrix());
    if (!fresh) it->second += t.local.matrix();
  }
  double total = 0.0;
  for (const auto& [range, m] : grouped) {
    if (range > sites) continue;
    // translates [x, x + range - 1] inside [0, sites - 1] containing the centre n
    const int lo = std::max(0, n - range + 1);
    const int hi = std::min(n, sites - range);
    const int count = std::max(0, hi - lo + 1);
    total += count * HermitianOperator::from_hermitian_part(m).norm() / range;
  }
  return total;
}

}  // namespace qht
