#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pscal/curvature/constants.hpp"
#include "pscal/curvature/scalar.hpp"
#include "pscal/geometry/base_manifold.hpp"

namespace pscal::feasibility {

using curvature::FiberSpec;
using curvature::SubmersionData;
using geometry::BaseManifold;
using geometry::ScalarField;

enum class TheoremId { product, general, ricci, kazdan_warner, canonical_variation };

std::string_view to_string(TheoremId id);

struct Certificate {
  TheoremId theorem = TheoremId::product;
  double alpha = 0.0;
  std::optional<double> epsilon;  ///< absent for the Kazdan-Warner and canonical tests
  bool pass = false;
  std::optional<double> witness;  ///< c for Kazdan-Warner, t for the canonical scan
  std::map<std::string, double> details;
  std::string note;
};

/// Recomputes alpha from the evaluated terms stored in `details`.
double reevaluate_alpha(const Certificate& cert);

/// alpha = lambda1/(2+eps) - b_k max(f - scal_B) + c_k c vol^{2/theta - 1}.
Certificate check_product(const BaseManifold& b, const FiberSpec& fiber, const ScalarField& f, double epsilon);

/// alpha = lambda1/(2+eps) - b_k max(f - scal_g + c) + c_k c vol^{2/theta - 1} + b_k min(delta_A).
/// Requires max(delta_A) <= 0 and du(H) == 0.
Certificate check_general(const BaseManifold& b, const FiberSpec& fiber, const SubmersionData& sub,
                          const ScalarField& f, double epsilon);

/// alpha = n (8k / ((2+eps)(k+1)) + (n-1)) - (max f + (c_k/b_k) c vol^{2/theta - 1}).
/// `known_ricci`, when given, must be >= n - 1.
Certificate check_ricci(int n, const FiberSpec& fiber, double vol_b, double max_f, double epsilon,
                        std::optional<double> known_ricci = std::nullopt);

/// Existence of c > 0 with c min f < min scal and max scal < c max f (strict).
Certificate check_kw(double min_f, double max_f, double min_scal, double max_scal);
Certificate check_kw(const ScalarField& f, const ScalarField& scal);

struct ScanRow {
  double t;
  double s_t;  ///< min over nodes of scal_t with the fiber's min scalar curvature
  double S_t;  ///< max over nodes of scal_t with the fiber's max scalar curvature
  double ratio;
};

struct CanonicalScanFields {
  ScalarField scal_b;
  ScalarField scal_g_horiz;
  ScalarField a_norm_sq;
};

struct CanonicalResult {
  Certificate certificate;
  std::vector<ScanRow> rows;
  double limit_ratio;
};

/// Scans t on `points` values uniformly spaced from 0 down to t_min (geometric
/// in e^{2t}) and passes at the first t with min f / max f < s_t / S_t whose
/// range [s_t, S_t] also passes the Kazdan-Warner test.
CanonicalResult check_canonical(const FiberSpec& fiber, const ScalarField& f, const CanonicalScanFields& scan,
                                double t_min = -12.0, int points = 400);

}  // namespace pscal::feasibility
