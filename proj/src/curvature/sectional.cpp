#include "pscal/curvature/sectional.hpp"

#include <cmath>

#include <fmt/format.h>

#include "pscal/error.hpp"

namespace pscal::curvature {

namespace {

double need(const std::optional<double>& v, const char* symbol, const char* model) {
  if (!v) throw InputError(fmt::format("{} model requires {}", model, symbol));
  return *v;
}

SectionalCurvatures warped_product(const SectionalInputs& in) {
  constexpr const char* m = "warped_product";
  const double phi = need(in.phi, "phi", m);
  const double e2 = std::exp(2.0 * phi);
  const double v1 = need(in.v1_norm, "|V1|", m);
  const double v2 = need(in.v2_norm, "|V2|", m);
  const double dot = in.v1_dot_v2.value_or(0.0);
  const double gram = v1 * v1 * v2 * v2 - dot * dot;
  const double grad = need(in.grad_phi_norm, "|grad phi|", m);
  const double v = need(in.v_norm, "|V|", m);
  const double dx = need(in.dphi_x, "dphi(X)", m);

  SectionalCurvatures out;
  out.horizontal = need(in.k_base_xy, "K_B(X,Y)", m);
  out.vertical = e2 * (need(in.k_fiber_v1v2, "K_F(V1,V2)", m) - e2 * grad * grad * gram);
  out.mixed = -e2 * v * v * (dx * dx + need(in.hess_phi_xx, "Hess phi(X,X)", m));
  return out;
}

SectionalCurvatures canonical_variation(const SectionalInputs& in) {
  constexpr const char* m = "canonical_variation";
  const double t = need(in.t, "t", m);
  const double e2 = std::exp(2.0 * t);
  SectionalCurvatures out;
  out.horizontal = need(in.k_base_xy, "K_B(X,Y)", m) * (1.0 - e2) + e2 * need(in.k_total_xy, "K_g(X,Y)", m);
  out.mixed = e2 * e2 * need(in.a_star_xv_sq, "|A*_X V|^2", m);
  out.vertical = e2 * need(in.k_total_v1v2, "K_g(V1,V2)", m);
  if (in.nabla_a_xyzw) out.r_xyzw = e2 * *in.nabla_a_xyzw;
  return out;
}

SectionalCurvatures general_vertical_warping(const SectionalInputs& in) {
  constexpr const char* m = "general_vertical_warping";
  const double phi = need(in.phi, "phi", m);
  const double e2 = std::exp(2.0 * phi);
  const double e4 = e2 * e2;
  if (in.v1_dot_v2 && *in.v1_dot_v2 != 0.0)
    throw DomainError(fmt::format("{} formulas require g(V1,V2) = 0, got {}", m, *in.v1_dot_v2));
  const double v1 = need(in.v1_norm, "|V1|", m);
  const double v2 = need(in.v2_norm, "|V2|", m);
  const double grad = need(in.grad_phi_norm, "|grad phi|", m);
  const double v = need(in.v_norm, "|V|", m);
  const double dx = need(in.dphi_x, "dphi(X)", m);

  SectionalCurvatures out;
  out.horizontal = (1.0 - e2) * need(in.k_base_xy, "K_B(X,Y)", m) + e2 * need(in.k_total_xy, "K_g(X,Y)", m);
  out.vertical = (e2 - e4) * need(in.k_fiber_v1v2, "K_F(V1,V2)", m) + e4 * need(in.k_total_v1v2, "K_g(V1,V2)", m) -
                 e4 * v1 * v1 * v2 * v2 * grad * grad +
                 e4 * need(in.dphi_sigma_v1v1, "dphi(sigma(V1,V1))", m) * v2 * v2 +
                 e4 * need(in.dphi_sigma_v2v2, "dphi(sigma(V2,V2))", m) * v1 * v1;
  out.mixed = need(in.k_total_xv, "K_g(X,V)", m) * e2 - e2 * (1.0 - e2) * need(in.a_star_xv_sq, "|A*_X V|^2", m) -
              (need(in.hess_phi_xx, "Hess phi(X,X)", m) + dx * dx) * e2 * v * v +
              2.0 * e2 * dx * need(in.shape_xv_v, "g(S_X V,V)", m);
  return out;
}

}  // namespace

SectionalCurvatures sectional_curvatures(SectionalModel model, const SectionalInputs& in) {
  switch (model) {
    case SectionalModel::warped_product:
      return warped_product(in);
    case SectionalModel::canonical_variation:
      return canonical_variation(in);
    case SectionalModel::general_vertical_warping:
      return general_vertical_warping(in);
  }
  throw InputError("unknown sectional-curvature model");
}

FiberSecondFundamentalForm fiber_second_fundamental_form(double exp_2phi, double t1_dot_t2, double grad_phi_norm) {
  const double along = -exp_2phi * t1_dot_t2 * grad_phi_norm;
  return {along, std::abs(along)};
}

}  // namespace pscal::curvature
