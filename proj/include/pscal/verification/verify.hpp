#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pscal/solver/minimize.hpp"

namespace pscal::verification {

using curvature::FiberSpec;
using curvature::SubmersionData;
using geometry::BaseManifold;
using geometry::ScalarField;

/// Acceptance thresholds for verification verdicts.
struct Thresholds {
  double spectral = 1e-8;       ///< absolute, spectral and constants-only backends
  double mesh_factor = 10.0;    ///< mesh tolerance is mesh_factor * h^2
  double identity_factor = 10.0;  ///< slack on the bound C * |EL|_inf / min u
  double residual = 1e-6;       ///< required |scal~ - f|_inf off the floor
  double gradient = 1e-8;       ///< required relative functional-gradient consistency

  /// Discretization tolerance for the backend of `b`.
  double discretization(const BaseManifold& b) const;
};

struct ConvergencePoint {
  double h;
  double error;
  double order;  ///< log(e_prev / e) / log(h_prev / h); NaN for the first point
};

struct VerificationReport {
  double sup_residual = 0.0;         ///< |scal~ - f|_inf from the u-form, floor nodes excluded
  double l2_residual = 0.0;          ///< (int (scal~ - f)^2)^{1/2}, floor nodes excluded
  double phi_form_sup_residual = 0.0;  ///< |warped_scalar(phi) - f|_inf (product mode)
  double identity_deviation = 0.0;   ///< |phi-form - f + C u^{-1} EL(u)|_inf
  double gradient_check_max = 0.0;   ///< |grad J + w EL|_inf relative to the size of the terms of EL at u
  double identity_bound = 0.0;       ///< C |EL|_inf / min u
  double el_residual_norm = 0.0;
  std::vector<ConvergencePoint> convergence_orders;
  std::size_t floor_nodes = 0;
  bool pass = false;
  std::vector<std::string> reasons;  ///< failed checks, empty on pass
};

/// Recomputes the warped scalar curvature from the solution and compares it
/// with f. The u-form (general_warped_scalar, product data in product mode) is
/// the primary check; the phi-form is accepted at discretization order.
VerificationReport verify_prescription(const BaseManifold& b, const solver::Solution& sol, const ScalarField& f,
                                       const FiberSpec& fiber, const std::optional<SubmersionData>& sub,
                                       const Thresholds& thresholds = {},
                                       const std::optional<ScalarField>& reference_scal = std::nullopt);

/// sup |warped_scalar(phi(u)) - f + 4k/(k+1) u^{-1} el_residual(u)| with
/// phi = 2/(k+1) ln u, using `reference_scal` as scal_B.
double cross_check_identity(const BaseManifold& b, const ScalarField& u, const FiberSpec& fiber,
                            const ScalarField& f, const ScalarField& reference_scal);

struct PoincareAudit {
  double lambda1 = 0.0;  ///< discrete first eigenvalue used by the audit
  int samples = 0;
  int corrected_violations = 0;
  double corrected_min_ratio = 0.0;  ///< min int|grad u|^2 / (lambda1 int (u - mean)^2)
  int printed_violations = 0;
  double printed_worst_ratio = 0.0;  ///< min int|grad u|^2 / (lambda1 int u^2) over fields in M
  bool constant_violates_printed = false;
  double eigenfunction_ratio = 0.0;  ///< Rayleigh quotient of the eigenvector / lambda1
};

/// Checks the mean-corrected Poincare inequality on random fields and
/// searches for violations of the uncorrected form over fields in the
/// constraint set (floor epsilon0, theta from k).
PoincareAudit poincare_audit(const BaseManifold& b, int samples, std::uint64_t seed = 12345, int k = 3,
                             double epsilon0 = 1e-3);

/// Appends estimated orders to (h, error) pairs.
std::vector<ConvergencePoint> convergence_orders(const std::vector<std::pair<double, double>>& h_error);

/// cross_check_identity on icospheres of the given levels for u, f sampled
/// from functions of the unit position.
std::vector<ConvergencePoint> identity_convergence_study(
    const std::vector<int>& levels, const FiberSpec& fiber,
    const std::function<double(const std::array<double, 3>&)>& u_fn,
    const std::function<double(const std::array<double, 3>&)>& f_fn);

void write_convergence_csv(const std::vector<ConvergencePoint>& pts, const std::filesystem::path& path);

}  // namespace pscal::verification
