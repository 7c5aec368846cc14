#include "pscal/solver/minimize.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pscal/error.hpp"
#include "pscal/simd/kernels.hpp"

namespace pscal::solver {

namespace {

bool on_floor(double u, double epsilon0) { return u <= epsilon0 * (1.0 + 1e-12); }

struct ProjectedGradient {
  std::vector<double> pg;
  double norm = 0.0;
  double removed_by_integral = 0.0;
};

// L2 gradient with the components that would leave the constraint set removed:
// floor-active nodes pushed downward, and the normal of int u^theta = 1 when
// the step would decrease the integral.
ProjectedGradient project_gradient(const ScalarField& u, const std::vector<double>& g, double epsilon0,
                                   double integral, double theta) {
  const auto w = u.base().weights();
  const std::size_t n = u.size();
  ProjectedGradient out;
  out.pg.assign(n, 0.0);
  std::vector<bool> free(n);
  for (std::size_t i = 0; i < n; ++i) {
    free[i] = !(on_floor(u[i], epsilon0) && g[i] > 0.0);
    if (free[i]) out.pg[i] = g[i];
  }
  if (integral <= 1.0 + 1e-9) {
    double dot = 0.0, nn = 0.0, nmax = 0.0;
    std::vector<double> nu(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!free[i]) continue;
      nu[i] = theta * std::pow(u[i], theta - 1.0);
      dot += w[i] * out.pg[i] * nu[i];
      nn += w[i] * nu[i] * nu[i];
      nmax = std::max(nmax, nu[i]);
    }
    if (dot > 0.0 && nn > 0.0) {
      const double mu = dot / nn;
      for (std::size_t i = 0; i < n; ++i) out.pg[i] -= mu * nu[i];
      out.removed_by_integral = mu * nmax;
    }
  }
  for (double v : out.pg) out.norm = std::max(out.norm, std::abs(v));
  return out;
}

std::vector<double> l2_gradient(const Problem& prob, const ScalarField& u) {
  const auto r = el_residual(prob, u);
  std::vector<double> g(r.values());
  for (double& v : g) v = -v;
  return g;
}

Solution finalize(const Problem& prob, const ScalarField& u, const SolverConfig& cfg, const ProjectedGradient& pgrad) {
  const int k = prob.fiber.k;
  const std::size_t n = u.size();
  Solution sol{u, recover_warping(u, k), functional_value(prob, u), 0.0, pgrad.norm, 0, {}, constraint_integral(u, k),
               false, false, false, {}, ""};
  sol.active_floor.assign(n, false);
  const auto r = el_residual(prob, u);
  double rmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (on_floor(u[i], cfg.epsilon0)) {
      sol.active_floor[i] = true;
      sol.boundary_active = true;
    } else {
      rmax = std::max(rmax, std::abs(r[i]));
    }
  }
  sol.el_residual_norm = rmax;
  sol.integral_active = pgrad.removed_by_integral > cfg.tol;
  return sol;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(epsilon0 > 0.0)) throw DomainError("epsilon0 must be positive");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (max_iter < 1) throw DomainError("max_iter must be positive");
  if (!(step > 0.0)) throw DomainError("step must be positive");
  if (!(contraction > 0.0 && contraction < 1.0)) throw DomainError("backtracking contraction must lie in (0, 1)");
  if (!(sufficient_decrease > 0.0 && sufficient_decrease < 1.0))
    throw DomainError("sufficient-decrease constant must lie in (0, 1)");
}

Solution minimize(const Problem& prob, const SolverConfig& cfg) {
  cfg.validate();
  prob.validate();
  const int k = prob.fiber.k;
  const auto dc = curvature::constants(k);
  const auto& kern = simd::active();
  const auto w = prob.base.weights();
  const std::size_t n = prob.base.node_count();

  ScalarField u = project(geometry::constant_field(prob.base, 1.0), cfg.epsilon0, k);
  double J = functional_value(prob, u);
  std::vector<double> g = l2_gradient(prob, u);

  Solution sol{u, u, J, 0.0, 0.0, 0, {}, 0.0, false, false, false, {J}, ""};
  double step = cfg.step;
  int it = 0;
  ProjectedGradient pgrad;
  for (;; ++it) {
    pgrad = project_gradient(u, g, cfg.epsilon0, constraint_integral(u, k), dc.theta);
    if (!std::isfinite(pgrad.norm))
      throw NumericalError(fmt::format("non-finite gradient at iteration {}", it));
    if (pgrad.norm <= cfg.tol) {
      sol.converged = true;
      sol.status = "converged";
      break;
    }
    if (it >= cfg.max_iter) {
      sol.status = fmt::format("max_iter {} reached", cfg.max_iter);
      break;
    }

    // Backtracking on the projected path u(s) = project(u - s g).
    bool accepted = false;
    ScalarField trial = u;
    double J_trial = J;
    for (int bt = 0; bt < 200; ++bt) {
      std::vector<double> v(u.values());
      kern.axpy(-step, g.data(), v.data(), n);
      for (double x : v)
        if (!std::isfinite(x)) throw NumericalError(fmt::format("non-finite iterate at iteration {}", it));
      trial = project(ScalarField(prob.base, std::move(v)), cfg.epsilon0, k);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += w[i] * g[i] * (u[i] - trial[i]);
      J_trial = functional_value(prob, trial);
      if (!std::isfinite(J_trial)) throw NumericalError(fmt::format("non-finite functional at iteration {}", it));
      const double slack = 1e-12 * std::max(1.0, std::abs(J));
      if (J_trial <= J - cfg.sufficient_decrease * decrease + slack && J_trial <= J + slack) {
        accepted = true;
        break;
      }
      step *= cfg.contraction;
    }
    if (!accepted) {
      sol.status = fmt::format("line search stalled at iteration {}", it);
      break;
    }
    const double umax = trial.max();
    if (umax > cfg.divergence_bound)
      throw NumericalError(fmt::format(
          "iterate sup norm {:.3e} exceeded {:.1e} at iteration {} (J = {:.6e}); the functional appears unbounded "
          "below on the constraint set",
          umax, cfg.divergence_bound, it + 1, J_trial));

    std::vector<double> g_new = l2_gradient(prob, trial);
    if (cfg.barzilai_borwein) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = trial[i] - u[i];
        const double y = g_new[i] - g[i];
        ss += w[i] * s * s;
        sy += w[i] * s * y;
      }
      step = (sy > 0.0 && ss > 0.0) ? std::clamp(ss / sy, 1e-10, 1e10) : cfg.step;
    } else {
      step = cfg.step;
    }
    u = std::move(trial);
    J = J_trial;
    g = std::move(g_new);
    sol.j_trace.push_back(J);
  }

  Solution out = finalize(prob, u, cfg, pgrad);
  out.J_value = J;
  out.iterations = it;
  out.converged = sol.converged;
  out.status = sol.status;
  out.j_trace = std::move(sol.j_trace);
  return out;
}

Solution evaluate_solution(const Problem& prob, const ScalarField& u, const SolverConfig& cfg) {
  cfg.validate();
  prob.validate();
  geometry::require_on(prob.base, u, "solution");
  const auto dc = curvature::constants(prob.fiber.k);
  const auto pgrad =
      project_gradient(u, l2_gradient(prob, u), cfg.epsilon0, constraint_integral(u, prob.fiber.k), dc.theta);
  Solution out = finalize(prob, u, cfg, pgrad);
  out.converged = pgrad.norm <= cfg.tol;
  out.status = out.converged ? "stationary" : "not stationary";
  out.j_trace = {out.J_value};
  return out;
}

}  // namespace pscal::solver
