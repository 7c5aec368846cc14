#include "pscal/solver/functional.hpp"

#include <cmath>

#include <fmt/format.h>

#include "pscal/error.hpp"

namespace pscal::solver {

namespace {

void require_positive(const ScalarField& u) {
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!(u[i] > 0.0)) throw DomainError(fmt::format("u must be positive, node {} has {}", i, u[i]));
}

double dirichlet_energy(const BaseManifold& b, const ScalarField& u) {
  const auto g = geometry::gradient_sq_norm(b, u);
  return 0.5 * geometry::integrate(b, g);
}

}  // namespace

double functional_J(const Problem& prob, const ScalarField& u) {
  if (prob.mode != Mode::product) throw InputError("functional_J needs a product-mode problem");
  geometry::require_on(prob.base, u, "u");
  require_positive(u);
  const auto dc = curvature::constants(prob.fiber.k);
  const auto w = prob.base.weights();
  double potential = 0.0;
  double fiber = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    potential += w[i] * (prob.f[i] - prob.reference_scal[i]) * u[i] * u[i];
    fiber += w[i] * prob.fiber.c * curvature::pow_theta(u[i], prob.fiber.k);
  }
  return dirichlet_energy(prob.base, u) - dc.b * potential + dc.c_k * fiber;
}

double functional_J_general(const Problem& prob, const ScalarField& u) {
  if (prob.mode != Mode::general) throw InputError("functional_J_general needs a general-mode problem");
  geometry::require_on(prob.base, u, "u");
  require_positive(u);
  const auto dc = curvature::constants(prob.fiber.k);
  const auto w = prob.base.weights();
  const double c = prob.fiber.c;
  double bulk = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double da = prob.sub->delta_A[i];
    const double lu = std::log(u[i]);
    bulk += w[i] * ((prob.reference_scal[i] + da - c - prob.f[i]) * u[i] * u[i] / 2.0 +
                    c * curvature::pow_theta(u[i], prob.fiber.k) / dc.theta - da * std::exp(dc.gamma * lu) / dc.gamma);
  }
  return dirichlet_energy(prob.base, u) + 2.0 * dc.b * bulk;
}

double functional_value(const Problem& prob, const ScalarField& u) {
  return prob.mode == Mode::product ? functional_J(prob, u) : functional_J_general(prob, u);
}

std::vector<double> functional_gradient(const Problem& prob, const ScalarField& u) {
  geometry::require_on(prob.base, u, "u");
  require_positive(u);
  const auto dc = curvature::constants(prob.fiber.k);
  const auto w = prob.base.weights();
  const double c = prob.fiber.c;
  std::vector<double> grad(u.size());
  prob.base.calculus().stiffness_apply(u.values(), grad);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double lu = std::log(u[i]);
    const double u_theta_1 = std::exp((dc.theta - 1.0) * lu);
    double pointwise;
    if (prob.mode == Mode::product) {
      pointwise = -2.0 * dc.b * (prob.f[i] - prob.reference_scal[i]) * u[i] + dc.theta * dc.c_k * c * u_theta_1;
    } else {
      const double da = prob.sub->delta_A[i];
      pointwise = 2.0 * dc.b *
                  ((prob.reference_scal[i] + da - c - prob.f[i]) * u[i] + c * u_theta_1 -
                   da * std::exp((dc.gamma - 1.0) * lu));
    }
    grad[i] += w[i] * pointwise;
  }
  return grad;
}

ScalarField el_residual(const Problem& prob, const ScalarField& u) {
  geometry::require_on(prob.base, u, "u");
  require_positive(u);
  const int k = prob.fiber.k;
  const double two_b = (k + 1.0) / (4.0 * k);
  const double c = prob.fiber.c;
  const auto lap = geometry::laplacian(prob.base, u);
  std::vector<double> r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double up = curvature::pow_p(u[i], k);
    if (prob.mode == Mode::product) {
      r[i] = lap[i] + two_b * (prob.f[i] - prob.reference_scal[i]) * u[i] - two_b * c * up;
    } else {
      const double da = prob.sub->delta_A[i];
      r[i] = lap[i] + two_b * u[i] * (prob.f[i] - prob.reference_scal[i]) - two_b * c * (up - u[i]) -
             two_b * da * (u[i] - curvature::pow_q(u[i], k));
    }
  }
  return ScalarField(prob.base, std::move(r));
}

double constraint_integral(const ScalarField& u, int k) {
  const auto w = u.base().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * curvature::pow_theta(u[i], k);
  return s;
}

ScalarField project(const ScalarField& u, double epsilon0, int k) {
  if (!(epsilon0 > 0.0)) throw DomainError(fmt::format("epsilon0 must be positive, got {}", epsilon0));
  const auto dc = curvature::constants(k);
  std::vector<double> v(u.values());
  for (double& x : v) x = std::max(x, epsilon0);
  ScalarField clamped(u.base(), std::move(v));
  const double integral = constraint_integral(clamped, k);
  if (integral >= 1.0 - 1e-12) return clamped;
  const double s = std::pow(integral, -1.0 / dc.theta);
  std::vector<double> scaled(clamped.values());
  for (double& x : scaled) x *= s;
  return ScalarField(u.base(), std::move(scaled));
}

ScalarField recover_warping(const ScalarField& u, int k) {
  require_positive(u);
  std::vector<double> phi(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) phi[i] = 2.0 / (k + 1.0) * std::log(u[i]);
  return ScalarField(u.base(), std::move(phi));
}

}  // namespace pscal::solver
