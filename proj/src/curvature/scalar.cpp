#include "pscal/curvature/scalar.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pscal/error.hpp"

namespace pscal::curvature {

namespace {

void require_nonnegative(const ScalarField& f, const char* name) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] < 0.0) throw DomainError(fmt::format("{} must be nonnegative, node {} has {}", name, i, f[i]));
}

void require_same_base(const ScalarField& a, const ScalarField& b) {
  if (!a.base().same_as(b.base())) throw MismatchError("fields are defined on different bases");
}

}  // namespace

SubmersionData SubmersionData::from_tensors(ScalarField scal_g, ScalarField a_horiz_sq, ScalarField a_norm_sq,
                                            ScalarField mean_curvature_pairing) {
  auto da = curvature::delta_A(a_horiz_sq, a_norm_sq);
  return SubmersionData{std::move(scal_g), std::move(da), std::move(mean_curvature_pairing), std::move(a_norm_sq),
                        std::move(a_horiz_sq)};
}

SubmersionData SubmersionData::product(const BaseManifold& b, const FiberSpec& fiber) {
  const auto scal_b = geometry::scalar_curvature_field(b);
  std::vector<double> sg(scal_b.values());
  for (double& v : sg) v += fiber.c;
  auto zero = geometry::constant_field(b, 0.0);
  return SubmersionData{ScalarField(b, std::move(sg)), zero, zero, zero, zero};
}

void SubmersionData::validate(const BaseManifold& b) const {
  geometry::require_on(b, scal_g, "scal_g");
  geometry::require_on(b, delta_A, "delta_A");
  geometry::require_on(b, mean_curvature_pairing, "mean_curvature_pairing");
  geometry::require_on(b, a_norm_sq, "a_norm_sq");
  geometry::require_on(b, a_horiz_sq, "a_horiz_sq");
  require_nonnegative(a_norm_sq, "a_norm_sq");
  require_nonnegative(a_horiz_sq, "a_horiz_sq");
  for (std::size_t i = 0; i < delta_A.size(); ++i) {
    const double expected = 3.0 * a_horiz_sq[i] - 2.0 * a_norm_sq[i];
    const double scale = std::max({1.0, 3.0 * a_horiz_sq[i], 2.0 * a_norm_sq[i]});
    if (std::abs(delta_A[i] - expected) > 1e-12 * scale)
      throw DomainError(fmt::format("delta_A at node {} is {} but 3 a_horiz_sq - 2 a_norm_sq is {}", i,
                                    delta_A[i], expected));
  }
}

ScalarField warped_scalar(const BaseManifold& b, const ScalarField& phi, const FiberSpec& fiber,
                          const std::optional<ScalarField>& scal_b) {
  geometry::require_on(b, phi, "phi");
  const ScalarField sb = scal_b ? *scal_b : geometry::scalar_curvature_field(b);
  geometry::require_on(b, sb, "scal_B");
  const auto g = geometry::gradient_sq_norm(b, phi);
  const auto lap = geometry::laplacian(b, phi);
  const double k = fiber.k;
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = sb[i] + std::exp(-2.0 * phi[i]) * fiber.c - k * (k - 1.0) * g[i] - 2.0 * k * g[i] - 2.0 * k * lap[i];
  return ScalarField(b, std::move(out));
}

ScalarField general_warped_scalar(const BaseManifold& b, const ScalarField& u, const FiberSpec& fiber,
                                  const SubmersionData& sub) {
  geometry::require_on(b, u, "u");
  geometry::require_on(b, sub.scal_g, "scal_g");
  geometry::require_on(b, sub.delta_A, "delta_A");
  geometry::require_on(b, sub.mean_curvature_pairing, "mean_curvature_pairing");
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!(u[i] > 0.0)) throw DomainError(fmt::format("u must be positive, node {} has {}", i, u[i]));
  const auto lap = geometry::laplacian(b, u);
  const double k = fiber.k;
  const double e = 4.0 / (k + 1.0);
  const double h_coeff = (4.0 + 2.0 * (k - 1.0)) * 2.0 / (k + 1.0);
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double lu = std::log(u[i]);
    out[i] = sub.scal_g[i] - 4.0 * k / (k + 1.0) * lap[i] / u[i] + h_coeff * sub.mean_curvature_pairing[i] / u[i] +
             (std::exp(-e * lu) - 1.0) * fiber.c + (1.0 - std::exp(e * lu)) * sub.delta_A[i];
  }
  return ScalarField(b, std::move(out));
}

ScalarField canonical_scal_t(double t, const ScalarField& scal_b, const ScalarField& scal_g_horiz,
                             const ScalarField& a_norm_sq, double scal_f) {
  require_same_base(scal_b, scal_g_horiz);
  require_same_base(scal_b, a_norm_sq);
  const double up = std::exp(2.0 * t);
  const double down = std::exp(-2.0 * t);
  std::vector<double> out(scal_b.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = scal_b[i] * (1.0 - up) + up * scal_g_horiz[i] + 2.0 * up * a_norm_sq[i] + down * scal_f;
  return ScalarField(scal_b.base(), std::move(out));
}

double canonical_ratio_limit(const FiberSpec& fiber) {
  if (!fiber.scal_range) throw DomainError("fiber scalar range is required for the canonical-variation limit");
  const auto [lo, hi] = *fiber.scal_range;
  if (!(hi > 0.0))
    throw DomainError(fmt::format("max fiber scalar curvature must be positive for the ratio limit, got {}", hi));
  return lo / hi;
}

ScalarField delta_A(const ScalarField& a_horiz_sq, const ScalarField& a_norm_sq) {
  require_same_base(a_horiz_sq, a_norm_sq);
  require_nonnegative(a_horiz_sq, "a_horiz_sq");
  require_nonnegative(a_norm_sq, "a_norm_sq");
  std::vector<double> out(a_horiz_sq.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 3.0 * a_horiz_sq[i] - 2.0 * a_norm_sq[i];
  return ScalarField(a_horiz_sq.base(), std::move(out));
}

}  // namespace pscal::curvature
