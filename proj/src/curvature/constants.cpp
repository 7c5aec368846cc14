#include "pscal/curvature/constants.hpp"

#include <cmath>

#include <fmt/format.h>

#include "pscal/error.hpp"

namespace pscal::curvature {

DimConstants constants(int k) {
  if (k < 2) throw DomainError(fmt::format("fiber dimension k must be >= 2, got {}", k));
  const double kd = k;
  DimConstants d;
  d.k = k;
  d.b = (kd + 1.0) / (8.0 * kd);
  d.c_k = (kd + 1.0) * (kd + 1.0) / (8.0 * (kd - 1.0) * kd);
  d.theta = 2.0 * (kd - 1.0) / (kd + 1.0);
  d.gamma = (2.0 * kd + 6.0) / (kd + 1.0);
  return d;
}

void FiberSpec::validate() const {
  if (k < 2) throw DomainError(fmt::format("fiber dimension k must be >= 2, got {}", k));
  if (!std::isfinite(c)) throw DomainError("fiber scalar curvature c must be finite");
  if (scal_range && !(scal_range->first <= scal_range->second))
    throw DomainError(fmt::format("fiber scalar range has min {} > max {}", scal_range->first, scal_range->second));
}

double pow_p(double u, int k) {
  if (k == 3) return 1.0;
  return std::exp((k - 3.0) / (k + 1.0) * std::log(u));
}

double pow_q(double u, int k) { return std::exp((k + 5.0) / (k + 1.0) * std::log(u)); }

double pow_theta(double u, int k) {
  if (k == 3) return u;
  return std::exp(2.0 * (k - 1.0) / (k + 1.0) * std::log(u));
}

}  // namespace pscal::curvature
