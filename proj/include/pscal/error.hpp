#pragma once

#include <stdexcept>
#include <string>

namespace pscal {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (k < 2, u <= 0, radius <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mesh is not a closed, connected, orientable 2-manifold.
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Iterative method failed or produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Missing or malformed input (config fields, formula symbols, files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis required by a certificate does not hold.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Field defined on a different base, or wrong length.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// Operation not available for this backend (e.g. fields on an analytic-only base).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace pscal
