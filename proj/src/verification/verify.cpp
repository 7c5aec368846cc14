#include "pscal/verification/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "pscal/error.hpp"
#include "pscal/geometry/field_io.hpp"

namespace pscal::verification {

double Thresholds::discretization(const BaseManifold& b) const {
  if (b.backend() == geometry::Backend::mesh) return mesh_factor * b.mesh_size() * b.mesh_size();
  return spectral;
}

namespace {

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double cross_check_identity(const BaseManifold& b, const ScalarField& u, const FiberSpec& fiber,
                            const ScalarField& f, const ScalarField& reference_scal) {
  const int k = fiber.k;
  const auto prob = solver::Problem::product(b, fiber, f, reference_scal);
  const auto phi = solver::recover_warping(u, k);
  const auto scal = curvature::warped_scalar(b, phi, fiber, reference_scal);
  const auto r = solver::el_residual(prob, u);
  const double coeff = 4.0 * k / (k + 1.0);
  double dev = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dev = std::max(dev, std::abs(scal[i] - f[i] + coeff * r[i] / u[i]));
  return dev;
}

VerificationReport verify_prescription(const BaseManifold& b, const solver::Solution& sol, const ScalarField& f,
                                       const FiberSpec& fiber, const std::optional<SubmersionData>& sub,
                                       const Thresholds& thresholds,
                                       const std::optional<ScalarField>& reference_scal) {
  geometry::require_on(b, sol.u, "solution");
  geometry::require_on(b, f, "f");
  const int k = fiber.k;
  const double coeff = 4.0 * k / (k + 1.0);
  const ScalarField ref = sub ? sub->scal_g : (reference_scal ? *reference_scal : geometry::scalar_curvature_field(b));

  SubmersionData data = sub ? *sub : SubmersionData::product(b, fiber);
  if (!sub) {
    std::vector<double> sg(ref.values());
    for (double& v : sg) v += fiber.c;
    data.scal_g = ScalarField(b, std::move(sg));
  }
  const auto prob = sub ? solver::Problem::general(b, fiber, f, *sub) : solver::Problem::product(b, fiber, f, ref);

  VerificationReport rep;
  const auto& u = sol.u;
  const auto scal_u = curvature::general_warped_scalar(b, u, fiber, data);
  const auto r = solver::el_residual(prob, u);
  const auto w = b.weights();
  std::vector<bool> floor(u.size(), false);
  if (sol.active_floor.size() == u.size()) floor = sol.active_floor;

  double l2 = 0.0, min_u = std::numeric_limits<double>::infinity(), el = 0.0, ident = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = scal_u[i] - f[i];
    ident = std::max(ident, std::abs(d + coeff * r[i] / u[i]));
    if (floor[i]) {
      ++rep.floor_nodes;
      continue;
    }
    rep.sup_residual = std::max(rep.sup_residual, std::abs(d));
    l2 += w[i] * d * d;
    min_u = std::min(min_u, u[i]);
    el = std::max(el, std::abs(r[i]));
  }
  rep.l2_residual = std::sqrt(l2);
  rep.el_residual_norm = el;
  rep.identity_bound = std::isfinite(min_u) ? coeff * el / min_u : 0.0;

  if (!sub) {
    const auto phi = solver::recover_warping(u, k);
    const auto scal_phi = curvature::warped_scalar(b, phi, fiber, ref);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (!floor[i]) s = std::max(s, std::abs(scal_phi[i] - f[i]));
    rep.phi_form_sup_residual = s;
    rep.identity_deviation = cross_check_identity(b, u, fiber, f, ref);
  } else {
    rep.identity_deviation = ident;
  }

  const auto grad = solver::functional_gradient(prob, u);
  std::vector<double> diff(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) diff[i] = grad[i] + w[i] * r[i];
  // Scale by the size of the individual residual terms; grad J itself vanishes at a solution.
  const auto lap = geometry::laplacian(b, u);
  double scale = sup_abs(grad);
  for (std::size_t i = 0; i < u.size(); ++i)
    scale = std::max(scale, w[i] * (std::abs(lap[i]) + std::abs(u[i]) * (1.0 + std::abs(f[i]) + std::abs(data.scal_g[i]))));
  rep.gradient_check_max = scale > 0.0 ? sup_abs(diff) / scale : sup_abs(diff);

  const double disc = thresholds.discretization(b);
  if (!sol.converged) rep.reasons.push_back("solution did not converge: " + sol.status);
  if (sol.integral_active)
    rep.reasons.push_back("constraint int u^theta >= 1 binds with a nonzero multiplier; u is not a PDE solution");
  if (rep.sup_residual > thresholds.residual)
    rep.reasons.push_back(fmt::format("curvature residual {:.3e} exceeds {:.1e}", rep.sup_residual,
                                      thresholds.residual));
  if (rep.sup_residual > thresholds.identity_factor * rep.identity_bound + thresholds.spectral)
    rep.reasons.push_back(fmt::format("curvature residual {:.3e} exceeds the identity bound {:.3e}",
                                      rep.sup_residual, thresholds.identity_factor * rep.identity_bound));
  if (rep.identity_deviation > disc)
    rep.reasons.push_back(fmt::format("identity deviation {:.3e} exceeds the discretization tolerance {:.3e}",
                                      rep.identity_deviation, disc));
  if (rep.gradient_check_max > thresholds.gradient)
    rep.reasons.push_back(fmt::format("functional gradient differs from the weighted residual by {:.3e}",
                                      rep.gradient_check_max));
  rep.pass = rep.reasons.empty();
  return rep;
}

PoincareAudit poincare_audit(const BaseManifold& b, int samples, std::uint64_t seed, int k, double epsilon0) {
  const auto pair = geometry::discrete_first_eigenpair(b);
  const double lambda1 = pair.value;
  const auto w = b.weights();
  const std::size_t n = b.node_count();
  const auto& calc = b.calculus();

  auto energy = [&](const std::vector<double>& v) {
    std::vector<double> g(n);
    calc.grad_sq(v, g);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * g[i];
    return s;
  };
  auto mass = [&](const std::vector<double>& v, double shift) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * (v[i] - shift) * (v[i] - shift);
    return s;
  };
  auto mean = [&](const std::vector<double>& v) {
    double s = 0.0, ws = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += w[i] * v[i];
      ws += w[i];
    }
    return s / ws;
  };

  PoincareAudit out;
  out.lambda1 = lambda1;
  out.samples = samples;
  out.corrected_min_ratio = std::numeric_limits<double>::infinity();
  out.printed_worst_ratio = std::numeric_limits<double>::infinity();
  out.eigenfunction_ratio = energy(pair.vector) / (lambda1 * mass(pair.vector, 0.0));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const auto& pos = b.positions();

  for (int s = 0; s < samples; ++s) {
    std::vector<double> v(n);
    if (s == 0) {
      std::fill(v.begin(), v.end(), 1.0);
    } else if (s % 2 == 1) {
      for (double& x : v) x = normal(rng);
    } else {
      // Smooth field: a few random plane waves in the embedding coordinates.
      std::array<double, 4> a{}, ph{};
      std::array<std::array<double, 3>, 4> dir{};
      for (int m = 0; m < 4; ++m) {
        a[m] = normal(rng);
        ph[m] = 2.0 * std::numbers::pi * uniform(rng);
        for (auto& d : dir[m]) d = 2.0 * normal(rng);
      }
      for (std::size_t i = 0; i < n; ++i) {
        double x = 0.0;
        for (int m = 0; m < 4; ++m)
          x += a[m] * std::sin(dir[m][0] * pos[i][0] + dir[m][1] * pos[i][1] + dir[m][2] * pos[i][2] + ph[m]);
        v[i] = x;
      }
    }

    const double e = energy(v);
    const double mc = mass(v, mean(v));
    if (mc > 0.0) {
      const double ratio = e / (lambda1 * mc);
      out.corrected_min_ratio = std::min(out.corrected_min_ratio, ratio);
      if (e < lambda1 * mc * (1.0 - 1e-10)) ++out.corrected_violations;
    } else if (e < 0.0) {
      ++out.corrected_violations;
    } else {
      out.corrected_min_ratio = std::min(out.corrected_min_ratio, 1.0);
    }

    // Printed form over the constraint set: shift positive, then project.
    const double vmin = *std::min_element(v.begin(), v.end());
    const double lift = s == 0 ? 0.0 : 0.1 + 2.0 * uniform(rng);
    std::vector<double> pv(v);
    for (double& x : pv) x = s == 0 ? x : x - vmin + lift;
    const auto in_m = solver::project(ScalarField(b, std::move(pv)), epsilon0, k);
    const double em = energy(in_m.values());
    const double mm = mass(in_m.values(), 0.0);
    const double ratio_m = em / (lambda1 * mm);
    out.printed_worst_ratio = std::min(out.printed_worst_ratio, ratio_m);
    if (em < lambda1 * mm) {
      ++out.printed_violations;
      if (s == 0) out.constant_violates_printed = true;
    }
  }
  return out;
}

std::vector<ConvergencePoint> convergence_orders(const std::vector<std::pair<double, double>>& h_error) {
  std::vector<ConvergencePoint> out;
  for (std::size_t i = 0; i < h_error.size(); ++i) {
    ConvergencePoint p{h_error[i].first, h_error[i].second, std::numeric_limits<double>::quiet_NaN()};
    if (i > 0)
      p.order = std::log(h_error[i - 1].second / h_error[i].second) / std::log(h_error[i - 1].first / h_error[i].first);
    out.push_back(p);
  }
  return out;
}

std::vector<ConvergencePoint> identity_convergence_study(
    const std::vector<int>& levels, const FiberSpec& fiber,
    const std::function<double(const std::array<double, 3>&)>& u_fn,
    const std::function<double(const std::array<double, 3>&)>& f_fn) {
  std::vector<std::pair<double, double>> he;
  for (int level : levels) {
    geometry::RoundSphere s;
    s.n = 2;
    s.radius = 1.0;
    s.mesh_level = level;
    const auto b = geometry::build_base(s);
    const auto u = geometry::sample_field(b, u_fn);
    const auto f = geometry::sample_field(b, f_fn);
    he.emplace_back(b.mesh_size(), cross_check_identity(b, u, fiber, f, geometry::scalar_curvature_field(b)));
  }
  return convergence_orders(he);
}

void write_convergence_csv(const std::vector<ConvergencePoint>& pts, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write {}", path.string()));
  out << "h,error,order\n";
  for (const auto& p : pts)
    out << geometry::format_real(p.h) << ',' << geometry::format_real(p.error) << ','
        << (std::isnan(p.order) ? std::string() : geometry::format_real(p.order)) << '\n';
}

}  // namespace pscal::verification
