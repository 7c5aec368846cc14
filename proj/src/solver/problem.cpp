#include "pscal/solver/problem.hpp"

#include <fmt/format.h>

#include "pscal/error.hpp"

namespace pscal::solver {

Problem Problem::product(const BaseManifold& b, const FiberSpec& fiber, ScalarField f,
                         std::optional<ScalarField> scal_b) {
  ScalarField ref = scal_b ? std::move(*scal_b) : geometry::scalar_curvature_field(b);
  Problem p{b, fiber, std::move(f), std::move(ref), std::nullopt, Mode::product};
  p.validate();
  return p;
}

Problem Problem::general(const BaseManifold& b, const FiberSpec& fiber, ScalarField f, SubmersionData sub) {
  ScalarField ref = sub.scal_g;
  Problem p{b, fiber, std::move(f), std::move(ref), std::move(sub), Mode::general};
  p.validate();
  return p;
}

void Problem::validate() const {
  fiber.validate();
  geometry::require_on(base, f, "f");
  geometry::require_on(base, reference_scal, "reference scalar curvature");
  if (mode == Mode::general) {
    if (!sub) throw InputError("general mode requires submersion data");
    sub->validate(base);
    if (sub->delta_A.max() > 0.0)
      throw HypothesisError(fmt::format("general mode requires max delta_A ≤ 0, got {}", sub->delta_A.max()));
    for (std::size_t i = 0; i < sub->mean_curvature_pairing.size(); ++i)
      if (sub->mean_curvature_pairing[i] != 0.0)
        throw HypothesisError("general mode requires minimal fibers (du(H) ≡ 0)");
  }
}

}  // namespace pscal::solver
