#pragma once

#include <vector>

#include "pscal/solver/problem.hpp"

namespace pscal::solver {

/// J(u) = 1/2 int |grad u|^2 - b_k int (f - scal_B) u^2 + c_k int c u^theta.
/// Throws InputError unless prob.mode is product.
double functional_J(const Problem& prob, const ScalarField& u);

/// J(u) = 1/2 int |grad u|^2
///      + 2 b_k int { (scal_g + dA - c - f) u^2 / 2 + c u^theta / theta - dA u^gamma / gamma }.
/// Throws InputError unless prob.mode is general.
double functional_J_general(const Problem& prob, const ScalarField& u);

/// The functional for the problem's mode.
double functional_value(const Problem& prob, const ScalarField& u);

/// Euclidean gradient of the discrete functional with respect to the nodal
/// values, assembled from the stiffness operator and the pointwise terms.
std::vector<double> functional_gradient(const Problem& prob, const ScalarField& u);

/// Product: lap u + 2 b_k (f - scal_B) u - 2 b_k c u^{(k-3)/(k+1)}.
/// General: lap u + 2 b_k u (f - scal_g) - 2 b_k c (u^{(k-3)/(k+1)} - u)
///          - 2 b_k dA (u - u^{(k+5)/(k+1)}).
/// In both modes the functional's gradient equals -w * el_residual, and a
/// zero residual makes the warped scalar curvature equal f.
/// Throws DomainError if u <= 0 somewhere.
ScalarField el_residual(const Problem& prob, const ScalarField& u);

/// Clamps to u >= epsilon0, then rescales by (int u^theta)^{-1/theta} when the
/// integral is below 1 (beyond a 1e-12 relative tolerance, which keeps the map
/// idempotent in floating point).
ScalarField project(const ScalarField& u, double epsilon0, int k);

/// int_B u^theta.
double constraint_integral(const ScalarField& u, int k);

/// phi = 2/(k+1) ln u. Throws DomainError if u <= 0 somewhere.
ScalarField recover_warping(const ScalarField& u, int k);

}  // namespace pscal::solver
