#pragma once

#include <utility>
#include <vector>

#include "qht/operator.hpp"
#include "qht/state.hpp"

namespace qht {

/// Largest many-body dimension (in qubits) the exact builders accept.
inline constexpr double kMaxQubits = 14.0;

struct InteractionTerm {
  int range = 1;
  /// Hermitian operator on (C^d)^{(x) range}.
  HermitianOperator local;
};

/// Translation-invariant finite-range interaction on a one-dimensional chain.
struct Interaction {
  Index site_dim = 2;
  std::vector<InteractionTerm> terms;

  /// Throws ValidationError if a term has the wrong dimension or range < 1.
  void validate() const;
  int max_range() const;
};

/// Phi - Psi as an interaction.
Interaction difference(const Interaction& phi, const Interaction& psi);

/// (nu^{(x) n}, omega^{(x) n}). Throws ValidationError if n log2(dim) > 14.
std::pair<PositiveFunctional, PositiveFunctional> iid_pair(const PositiveFunctional& nu, const PositiveFunctional& omega,
                                                           int n);

/// Sum of the translates of every term lying inside a chain of `sites` sites
/// (open boundary).
HermitianOperator chain_hamiltonian(const Interaction& phi, int sites);

/// chain_hamiltonian on the box [-n, n].
HermitianOperator box_hamiltonian(const Interaction& phi, int n);

/// e^{-H} / Tr e^{-H} on the box [-n, n].
PositiveFunctional gibbs_state(const Interaction& phi, int n);

/// (1 / |box|) log Tr e^{-H}.
double pressure(const Interaction& phi, int n);

/// (1 / |box|) log Tr nu_n^s omega_n^{1-s} for the Gibbs states of phi and psi.
double renyi_density(const Interaction& phi, const Interaction& psi, int n, double s);

/// sum over X containing the centre of the box of |X|^{-1} ||Phi_X||, terms
/// of equal range summed before taking the operator norm.
double triple_norm(const Interaction& phi, int n);

}  // namespace qht
