#pragma once

#include <stdexcept>
#include <string>

namespace qht {

/// Input rejected by a precondition check (bad shape, non-Hermitian matrix,
/// non-faithful state, out-of-range parameter, malformed file).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not be completed to the requested accuracy
/// (quadrature did not converge, singular resolvent, negative determinant).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qht
