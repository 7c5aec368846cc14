#pragma once

#include <string>
#include <vector>

#include "pscal/solver/functional.hpp"

namespace pscal::solver {

struct SolverConfig {
  double epsilon0 = 1e-3;   ///< floor of the constraint set
  double tol = 1e-8;        ///< sup norm of the projected gradient
  int max_iter = 50000;
  double step = 1.0;        ///< first trial step
  double contraction = 0.5;
  double sufficient_decrease = 1e-4;
  /// Trial steps after the first come from the Barzilai-Borwein quotient.
  bool barzilai_borwein = true;
  /// Iterates whose sup norm exceeds this are treated as divergence.
  double divergence_bound = 1e12;

  void validate() const;
};

struct Solution {
  ScalarField u;
  ScalarField phi;
  double J_value = 0.0;
  double el_residual_norm = 0.0;        ///< sup of |el_residual| over floor-inactive nodes
  double projected_gradient_norm = 0.0;
  int iterations = 0;
  std::vector<bool> active_floor;       ///< nodes with u == epsilon0
  double constraint_integral = 0.0;
  bool converged = false;
  bool boundary_active = false;         ///< some node sits on the floor
  bool integral_active = false;         ///< int u^theta = 1 binds with a nonzero multiplier
  std::vector<double> j_trace;
  std::string status;
};

/// Projected gradient descent with Armijo backtracking over
/// {u >= epsilon0, int u^theta >= 1}, started from project(1).
/// Throws NumericalError on non-finite values or divergence.
Solution minimize(const Problem& prob, const SolverConfig& cfg = {});

/// Evaluates a given field as a candidate minimizer: residuals, activity
/// flags and the projected gradient, with converged meaning stationary to
/// cfg.tol. No iterations are run.
Solution evaluate_solution(const Problem& prob, const ScalarField& u, const SolverConfig& cfg = {});

}  // namespace pscal::solver
