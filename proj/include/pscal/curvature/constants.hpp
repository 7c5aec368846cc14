#pragma once

#include <optional>
#include <utility>

namespace pscal::curvature {

/// Dimensional constants of a k-dimensional fiber.
struct DimConstants {
  int k = 0;
  double b = 0.0;      ///< (k+1) / (8k)
  double c_k = 0.0;    ///< (k+1)^2 / (8 (k-1) k)
  double theta = 0.0;  ///< 2 (k-1) / (k+1)
  double gamma = 0.0;  ///< (2k+6) / (k+1)
};

/// Throws DomainError for k < 2.
DimConstants constants(int k);

/// Fiber of dimension k with constant scalar curvature c; `scal_range` is the
/// (min, max) scalar curvature of a non-constant fiber metric, used only by
/// the canonical-variation scan.
struct FiberSpec {
  int k = 2;
  double c = 0.0;
  std::optional<std::pair<double, double>> scal_range;

  /// Throws DomainError unless k >= 2 and min <= max.
  void validate() const;
};

/// u^{(k-3)/(k+1)}, exactly 1 for k = 3.
double pow_p(double u, int k);
/// u^{(k+5)/(k+1)}.
double pow_q(double u, int k);
/// u^{theta} with theta = 2(k-1)/(k+1).
double pow_theta(double u, int k);

}  // namespace pscal::curvature
