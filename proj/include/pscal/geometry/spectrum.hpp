#pragma once

#include <vector>

#include "pscal/geometry/calculus.hpp"

namespace pscal::geometry {

struct EigenOptions {
  double tol = 1e-10;  ///< relative residual |K v - lambda W v|_{W^-1} / lambda
  int max_iter = 2000;
  double inner_tol = 1e-13;  ///< relative residual for matrix-free inner solves
  double shift = 0.0;        ///< inverse-iteration shift; 0 picks 1 / sum(w)
};

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;  ///< W-normalized, W-orthogonal to constants
  int iterations = 0;
  double residual = 0.0;
};

/// Smallest positive eigenvalue of K v = lambda W v with constants deflated,
/// by shifted inverse iteration. K is the calculus' stiffness operator and W
/// the diagonal of quadrature weights. The start vector is a fixed
/// deterministic sequence, so repeated calls return identical results.
/// Throws NumericalError if the iteration does not converge.
Eigenpair first_eigenpair(const Calculus& calc, const EigenOptions& opts = {});

/// Rayleigh quotient sum_i w_i |grad u|_i^2 / sum_i w_i u_i^2.
double rayleigh_quotient(const Calculus& calc, const std::vector<double>& u);

}  // namespace pscal::geometry
