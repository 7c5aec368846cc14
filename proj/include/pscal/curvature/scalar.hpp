#pragma once

#include <optional>

#include "pscal/curvature/constants.hpp"
#include "pscal/geometry/base_manifold.hpp"

namespace pscal::curvature {

using geometry::BaseManifold;
using geometry::ScalarField;

/// Basic data of a Riemannian submersion M -> B, sampled on the base.
struct SubmersionData {
  ScalarField scal_g;                  ///< scalar curvature of the total space
  ScalarField delta_A;                 ///< 3 a_horiz_sq - 2 a_norm_sq
  ScalarField mean_curvature_pairing;  ///< du(H); zero for minimal fibers
  ScalarField a_norm_sq;               ///< sum_{i,r} |A*_{e_i} v_r|^2
  ScalarField a_horiz_sq;              ///< sum_{i,j} |A_{e_i} e_j|^2

  /// Builds the record with delta_A computed from the two tensor norms.
  static SubmersionData from_tensors(ScalarField scal_g, ScalarField a_horiz_sq, ScalarField a_norm_sq,
                                     ScalarField mean_curvature_pairing);

  /// Trivial bundle B x F: scal_g = scal_B + c, no A tensor, minimal fibers.
  static SubmersionData product(const BaseManifold& b, const FiberSpec& fiber);

  /// Checks common base, nonnegative tensor norms and the delta_A identity
  /// (1e-12, relative to the magnitude of the terms). Throws DomainError.
  void validate(const BaseManifold& b) const;
};

/// scal_B + e^{-2 phi} c - k(k-1)|grad phi|^2 - 2k |grad phi|^2 - 2k lap(phi).
/// `scal_b` defaults to the base's scalar curvature field.
ScalarField warped_scalar(const BaseManifold& b, const ScalarField& phi, const FiberSpec& fiber,
                          const std::optional<ScalarField>& scal_b = std::nullopt);

/// Scalar curvature of the general vertical warping by u^{4/(k+1)}:
/// scal_g - 4k/(k+1) u^{-1} lap(u) + (4 + 2(k-1)) 2/(k+1) u^{-1} du(H)
///   + (u^{-4/(k+1)} - 1) c + (1 - u^{4/(k+1)}) delta_A.
/// Throws DomainError if u <= 0 somewhere.
ScalarField general_warped_scalar(const BaseManifold& b, const ScalarField& u, const FiberSpec& fiber,
                                  const SubmersionData& sub);

/// Scalar curvature of the canonical variation g_t:
/// scal_B (1 - e^{2t}) + e^{2t} scal_g^H + 2 e^{2t} a_norm_sq + e^{-2t} scal_F.
ScalarField canonical_scal_t(double t, const ScalarField& scal_b, const ScalarField& scal_g_horiz,
                             const ScalarField& a_norm_sq, double scal_f);

/// min scal_F / max scal_F. Throws DomainError when the range is absent or max <= 0.
double canonical_ratio_limit(const FiberSpec& fiber);

/// 3 a_horiz_sq - 2 a_norm_sq. Throws DomainError on negative inputs.
ScalarField delta_A(const ScalarField& a_horiz_sq, const ScalarField& a_norm_sq);

}  // namespace pscal::curvature
