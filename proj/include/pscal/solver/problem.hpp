#pragma once

#include <optional>

#include "pscal/curvature/scalar.hpp"
#include "pscal/geometry/base_manifold.hpp"

namespace pscal::solver {

using curvature::FiberSpec;
using curvature::SubmersionData;
using geometry::BaseManifold;
using geometry::ScalarField;

enum class Mode { product, general };

/// Prescription problem: find u > 0 whose warping realizes f.
/// `reference_scal` is scal_B in product mode and scal_g in general mode.
struct Problem {
  BaseManifold base;
  FiberSpec fiber;
  ScalarField f;
  ScalarField reference_scal;
  std::optional<SubmersionData> sub;
  Mode mode = Mode::product;

  /// Product bundle B x F; `scal_b` defaults to the base's scalar curvature.
  static Problem product(const BaseManifold& b, const FiberSpec& fiber, ScalarField f,
                         std::optional<ScalarField> scal_b = std::nullopt);
  /// Submersion with the given data; requires max delta_A <= 0 and du(H) == 0.
  static Problem general(const BaseManifold& b, const FiberSpec& fiber, ScalarField f, SubmersionData sub);

  /// Throws on inconsistent bases, invalid fiber, or violated hypotheses.
  void validate() const;
};

}  // namespace pscal::solver
