#pragma once

#include <optional>

namespace pscal::curvature {

enum class SectionalModel { warped_product, canonical_variation, general_vertical_warping };

/// Pointwise scalars consumed by the sectional-curvature formulas. X, Y are
/// horizontal, V, V1, V2 vertical; curvatures are non-reduced, i.e.
/// R(a, b, b, a) without dividing by the Gram determinant. Each model reads
/// only the entries it needs and names the first missing one in an InputError.
struct SectionalInputs {
  std::optional<double> phi;             ///< warping exponent at the point
  std::optional<double> t;               ///< canonical-variation parameter
  std::optional<double> k_base_xy;       ///< K_B(X, Y)
  std::optional<double> k_fiber_v1v2;    ///< K_F(V1, V2)
  std::optional<double> k_total_xy;      ///< K_g(X, Y)
  std::optional<double> k_total_v1v2;    ///< K_g(V1, V2)
  std::optional<double> k_total_xv;      ///< K_g(X, V)
  std::optional<double> grad_phi_norm;   ///< |grad phi|
  std::optional<double> dphi_x;          ///< dphi(X) = <grad phi, X>
  std::optional<double> hess_phi_xx;     ///< Hess phi(X, X)
  std::optional<double> a_star_xv_sq;    ///< |A*_X V|^2
  std::optional<double> shape_xv_v;      ///< g(S_X V, V)
  std::optional<double> dphi_sigma_v1v1; ///< dphi(sigma(V1, V1))
  std::optional<double> dphi_sigma_v2v2; ///< dphi(sigma(V2, V2))
  std::optional<double> v1_norm;         ///< |V1|
  std::optional<double> v2_norm;         ///< |V2|
  std::optional<double> v1_dot_v2;       ///< <V1, V2>; taken as 0 when absent
  std::optional<double> v_norm;          ///< |V| in the mixed plane
  std::optional<double> nabla_a_xyzw;    ///< g((nabla_X A)_Y Z, W)
};

struct SectionalCurvatures {
  double horizontal = 0.0;  ///< K~(X, Y)
  double vertical = 0.0;    ///< K~(V1, V2)
  double mixed = 0.0;       ///< K~(X, V)
  std::optional<double> r_xyzw;  ///< R~(X, Y, Z, W), canonical variation only
};

/// Evaluates the horizontal, vertical and mixed plane curvatures of the
/// chosen deformation.
///
/// warped_product (g_B + e^{2 phi} g_F):
///   K~(X,Y)   = K_B(X,Y)
///   K~(V1,V2) = e^{2phi} (K_F - e^{2phi} |grad phi|^2 (|V1|^2 |V2|^2 - <V1,V2>^2))
///   K~(X,V)   = -e^{2phi} |V|^2 (dphi(X)^2 + Hess phi(X,X))
/// canonical_variation (vertical scaled by e^{2t}, totally geodesic fibers):
///   K~(X,Y) = (1 - e^{2t}) K_B + e^{2t} K_g(X,Y),  K~(X,V) = e^{4t} |A*_X V|^2,
///   K~(V1,V2) = e^{2t} K_g(V1,V2),  R~(X,Y,Z,W) = e^{2t} g((nabla_X A)_Y Z, W)
/// general_vertical_warping (vertical scaled by e^{2 phi}, phi basic, V1 _|_ V2):
///   K~(X,Y)   = (1 - e^{2phi}) K_B + e^{2phi} K_g(X,Y)
///   K~(V1,V2) = (e^{2phi} - e^{4phi}) K_F + e^{4phi} K_g(V1,V2)
///               - e^{4phi} |V1|^2 |V2|^2 |grad phi|^2
///               + e^{4phi} (dphi(sigma(V1,V1)) |V2|^2 + dphi(sigma(V2,V2)) |V1|^2)
///   K~(X,V)   = e^{2phi} K_g(X,V) - e^{2phi} (1 - e^{2phi}) |A*_X V|^2
///               - (Hess phi(X,X) + dphi(X)^2) e^{2phi} |V|^2 + 2 e^{2phi} dphi(X) g(S_X V, V)
SectionalCurvatures sectional_curvatures(SectionalModel model, const SectionalInputs& in);

struct FiberSecondFundamentalForm {
  double along_gradient;  ///< component of sigma~(T1, T2) along grad phi / |grad phi|
  double magnitude;
};

/// Second fundamental form of the fibers of a warped product,
/// sigma~(T1, T2) = -e^{2phi} g(T1, T2) grad phi.
FiberSecondFundamentalForm fiber_second_fundamental_form(double exp_2phi, double t1_dot_t2, double grad_phi_norm);

}  // namespace pscal::curvature
