#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pscal/curvature/constants.hpp"
#include "pscal/curvature/scalar.hpp"
#include "pscal/curvature/sectional.hpp"
#include "pscal/error.hpp"

using namespace pscal;
using namespace pscal::curvature;
using geometry::BaseManifold;
using geometry::ScalarField;
constexpr double pi = std::numbers::pi;

namespace {

BaseManifold torus2() { return geometry::build_base(geometry::FlatTorus{{2 * pi, 2 * pi}, {25, 25}}); }

FiberSpec make_fiber(int k, double c, std::optional<std::pair<double, double>> range = std::nullopt) {
  return FiberSpec{k, c, range};
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST_CASE("dimensional constants match their closed forms") {
  for (int k = 2; k <= 12; ++k) {
    CAPTURE(k);
    const auto d = constants(k);
    CHECK(d.k == k);
    CHECK(d.b == doctest::Approx((k + 1.0) / (8.0 * k)).epsilon(1e-15));
    CHECK(d.c_k == doctest::Approx((k + 1.0) * (k + 1.0) / (8.0 * (k - 1.0) * k)).epsilon(1e-15));
    CHECK(d.theta == doctest::Approx(2.0 * (k - 1.0) / (k + 1.0)).epsilon(1e-15));
    CHECK(d.gamma == doctest::Approx((2.0 * k + 6.0) / (k + 1.0)).epsilon(1e-15));
    CHECK(d.theta * d.c_k == doctest::Approx(2.0 * d.b).epsilon(1e-14));
    CHECK(2.0 * d.b == doctest::Approx((k + 1.0) / (4.0 * k)).epsilon(1e-15));
    for (double u : {0.3, 1.0, 2.5}) {
      CHECK(pow_p(u, k) == doctest::Approx(std::pow(u, (k - 3.0) / (k + 1.0))).epsilon(1e-14));
      CHECK(pow_q(u, k) == doctest::Approx(std::pow(u, (k + 5.0) / (k + 1.0))).epsilon(1e-14));
      CHECK(pow_theta(u, k) == doctest::Approx(std::pow(u, d.theta)).epsilon(1e-14));
    }
  }
  CHECK(pow_p(7.3, 3) == 1.0);
  CHECK(pow_theta(7.3, 3) == 7.3);
  CHECK_THROWS_AS(constants(1), DomainError);
  CHECK_THROWS_AS(constants(0), DomainError);
}

TEST_CASE("fiber specification validation") {
  CHECK_NOTHROW(make_fiber(3, -1.0, std::pair(2.0, 6.0)).validate());
  CHECK_THROWS_AS(make_fiber(1, 0.0, std::nullopt).validate(), DomainError);
  CHECK_THROWS_AS((make_fiber(3, 0.0, std::pair(6.0, 2.0)).validate()), DomainError);
}

TEST_CASE("warped scalar curvature of a constant warping") {
  const auto b = geometry::build_base(geometry::RoundSphere{2, 1.0, 3, 65});
  const FiberSpec fiber{3, -6.0, std::nullopt};
  const double phi0 = 0.5 * std::log(2.0);
  const auto s = warped_scalar(b, geometry::constant_field(b, phi0), fiber);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(2.0 - 3.0).epsilon(1e-14));
}

TEST_CASE("warped scalar curvature matches the warping-function form") {
  // Oracle: with w = e^phi, scal = scal_B + c / w^2 - 2k lap(w) / w - k(k-1) |grad w|^2 / w^2,
  // evaluated from analytic derivatives of w.
  const auto b = torus2();
  const double a1 = 0.3, a2 = -0.2;
  for (int k : {2, 3, 5}) {
    const FiberSpec fiber{k, -1.5, std::nullopt};
    const auto phi = geometry::sample_field(b, [&](const auto& p) { return a1 * std::sin(p[0]) + a2 * std::cos(p[1]); });
    const auto s = warped_scalar(b, phi, fiber);
    const auto& pos = b.positions();
    double err = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double x = pos[i][0], y = pos[i][1];
      const double w = std::exp(phi[i]);
      const double wx = w * a1 * std::cos(x), wy = -w * a2 * std::sin(y);
      const double wxx = w * (a1 * a1 * std::cos(x) * std::cos(x) - a1 * std::sin(x));
      const double wyy = w * (a2 * a2 * std::sin(y) * std::sin(y) - a2 * std::cos(y));
      const double oracle =
          fiber.c / (w * w) - 2.0 * k * (wxx + wyy) / w - k * (k - 1.0) * (wx * wx + wy * wy) / (w * w);
      err = std::max(err, std::abs(s[i] - oracle));
    }
    CHECK(err <= 1e-10);
  }
}

TEST_CASE("u-form of the general warping equals the phi-form on product data") {
  // Resolution high enough that both u and ln u are resolved to rounding.
  const auto b = geometry::build_base(geometry::FlatTorus{{2 * pi, 2 * pi}, {45, 45}});
  const FiberSpec fiber{3, -2.0, std::nullopt};
  const auto sub = SubmersionData::product(b, fiber);
  const auto u = geometry::sample_field(b, [](const auto& p) { return std::exp(0.3 * std::sin(p[0]) + 0.2 * std::cos(2 * p[1])); });
  std::vector<double> phi(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) phi[i] = 0.5 * std::log(u[i]);
  const auto s_u = general_warped_scalar(b, u, fiber, sub);
  const auto s_phi = warped_scalar(b, ScalarField(b, phi), fiber);
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(s_u[i] - s_phi[i]));
  CHECK(err <= 1e-9);
}

TEST_CASE("general warped scalar with synthetic submersion data") {
  const auto b = torus2();
  const int k = 4;
  const FiberSpec fiber{k, -1.0, std::nullopt};
  const auto scal_g = geometry::sample_field(b, [](const auto& p) { return 1.0 + 0.5 * std::sin(p[0]); });
  const auto h = geometry::sample_field(b, [](const auto& p) { return 0.2 + 0.1 * std::cos(p[1]); });
  const auto n = geometry::sample_field(b, [](const auto& p) { return 0.4 + 0.1 * std::sin(p[1]); });
  const auto hp = geometry::sample_field(b, [](const auto& p) { return 0.05 * std::cos(p[0]); });
  const auto sub = SubmersionData::from_tensors(scal_g, h, n, hp);
  CHECK_NOTHROW(sub.validate(b));
  const double a = 0.25;
  const auto u = geometry::sample_field(b, [&](const auto& p) { return 2.0 + a * std::sin(p[0] + p[1]); });
  const auto s = general_warped_scalar(b, u, fiber, sub);
  const auto& pos = b.positions();
  const double e = 4.0 / (k + 1.0);
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double lap = -2.0 * a * std::sin(pos[i][0] + pos[i][1]);
    const double da = 3.0 * h[i] - 2.0 * n[i];
    const double oracle = scal_g[i] - 4.0 * k / (k + 1.0) * lap / u[i] +
                          (4.0 + 2.0 * (k - 1.0)) * 2.0 / (k + 1.0) * hp[i] / u[i] +
                          (std::pow(u[i], -e) - 1.0) * fiber.c + (1.0 - std::pow(u[i], e)) * da;
    err = std::max(err, std::abs(s[i] - oracle));
  }
  CHECK(err <= 1e-10);
  CHECK_THROWS_AS(general_warped_scalar(b, geometry::constant_field(b, 0.0), fiber, sub), DomainError);
}

TEST_CASE("submersion data validation") {
  const auto b = torus2();
  const FiberSpec fiber{3, -1.0, std::nullopt};
  const auto p = SubmersionData::product(b, fiber);
  CHECK(p.scal_g.max() == -1.0);
  CHECK(p.delta_A.max() == 0.0);
  CHECK(p.mean_curvature_pairing.max() == 0.0);

  auto bad = p;
  bad.delta_A = geometry::constant_field(b, -0.5);
  CHECK_THROWS_AS(bad.validate(b), DomainError);

  const auto d = delta_A(geometry::constant_field(b, 0.3), geometry::constant_field(b, 0.6));
  CHECK(d.max() == doctest::Approx(3 * 0.3 - 2 * 0.6));
  CHECK_THROWS_AS(delta_A(geometry::constant_field(b, -0.1), geometry::constant_field(b, 0.0)), DomainError);

  const auto other = torus2();
  auto foreign = p;
  foreign.scal_g = geometry::constant_field(other, -1.0);
  CHECK_THROWS_AS(foreign.validate(b), pscal::MismatchError);
}

TEST_CASE("canonical variation scalar curvature") {
  const auto b = torus2();
  const auto scal_b = geometry::constant_field(b, 0.0);
  const auto horiz = geometry::constant_field(b, -0.2);
  const auto a = geometry::constant_field(b, 0.1);
  const auto s0 = canonical_scal_t(0.0, scal_b, horiz, a, 6.0);
  CHECK(s0.max() == doctest::Approx(-0.2 + 0.2 + 6.0));
  const double t = -3.0;
  const auto st = canonical_scal_t(t, scal_b, horiz, a, 6.0);
  CHECK(st.max() == doctest::Approx(std::exp(2 * t) * (-0.2 + 0.2) + std::exp(-2 * t) * 6.0));

  CHECK(canonical_ratio_limit({3, 0.0, std::pair(2.0, 6.0)}) == doctest::Approx(1.0 / 3.0));
  CHECK(canonical_ratio_limit({3, 6.0, std::pair(6.0, 6.0)}) == 1.0);
  CHECK_THROWS_AS(canonical_ratio_limit({3, 0.0, std::nullopt}), DomainError);
  CHECK_THROWS_AS(canonical_ratio_limit({3, 0.0, std::pair(-2.0, 0.0)}), DomainError);
}

TEST_CASE("sectional curvatures reduce to unwarped values at zero warping") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-2.0, 2.0), pos(0.1, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    SectionalInputs in;
    in.phi = 0.0;
    in.t = 0.0;
    in.k_base_xy = d(rng);
    in.k_fiber_v1v2 = d(rng);
    in.k_total_xy = d(rng);
    in.k_total_v1v2 = d(rng);
    in.k_total_xv = d(rng);
    in.grad_phi_norm = 0.0;
    in.dphi_x = 0.0;
    in.hess_phi_xx = 0.0;
    in.a_star_xv_sq = pos(rng);
    in.shape_xv_v = d(rng);
    in.dphi_sigma_v1v1 = 0.0;
    in.dphi_sigma_v2v2 = 0.0;
    in.v1_norm = pos(rng);
    in.v2_norm = pos(rng);
    in.v_norm = pos(rng);
    in.nabla_a_xyzw = d(rng);

    const auto w = sectional_curvatures(SectionalModel::warped_product, in);
    CHECK(w.horizontal == *in.k_base_xy);
    CHECK(w.vertical == *in.k_fiber_v1v2);
    CHECK(w.mixed == 0.0);

    const auto c = sectional_curvatures(SectionalModel::canonical_variation, in);
    CHECK(c.horizontal == *in.k_total_xy);
    CHECK(c.vertical == *in.k_total_v1v2);
    CHECK(c.mixed == *in.a_star_xv_sq);
    CHECK(*c.r_xyzw == *in.nabla_a_xyzw);

    const auto g = sectional_curvatures(SectionalModel::general_vertical_warping, in);
    CHECK(g.horizontal == *in.k_total_xy);
    CHECK(g.vertical == *in.k_total_v1v2);
    CHECK(g.mixed == *in.k_total_xv);
  }
}

TEST_CASE("general vertical warping by a constant is the canonical variation") {
  // Totally geodesic fibers: K_g(V1,V2) = K_F, K_g(X,V) = |A*_X V|^2, sigma = S = 0.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(-2.0, 2.0), pos(0.1, 2.0), tt(-3.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double t = tt(rng);
    const double kf = d(rng), a = pos(rng);
    SectionalInputs in;
    in.phi = t;
    in.t = t;
    in.k_base_xy = d(rng);
    in.k_total_xy = d(rng);
    in.k_fiber_v1v2 = kf;
    in.k_total_v1v2 = kf;
    in.k_total_xv = a;
    in.a_star_xv_sq = a;
    in.grad_phi_norm = 0.0;
    in.dphi_x = 0.0;
    in.hess_phi_xx = 0.0;
    in.shape_xv_v = 0.0;
    in.dphi_sigma_v1v1 = 0.0;
    in.dphi_sigma_v2v2 = 0.0;
    in.v1_norm = pos(rng);
    in.v2_norm = pos(rng);
    in.v_norm = pos(rng);
    const auto g = sectional_curvatures(SectionalModel::general_vertical_warping, in);
    const auto c = sectional_curvatures(SectionalModel::canonical_variation, in);
    CHECK(rel_err(g.horizontal, c.horizontal) <= 1e-12);
    CHECK(rel_err(g.vertical, c.vertical) <= 1e-12);
    CHECK(rel_err(g.mixed, c.mixed) <= 1e-12);
  }
}

TEST_CASE("warped product is the general vertical warping of a product") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(-2.0, 2.0), pos(0.1, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    SectionalInputs in;
    in.phi = d(rng) * 0.5;
    in.k_base_xy = d(rng);
    in.k_total_xy = *in.k_base_xy;
    in.k_fiber_v1v2 = d(rng);
    in.k_total_v1v2 = *in.k_fiber_v1v2;
    in.k_total_xv = 0.0;
    in.a_star_xv_sq = 0.0;
    in.grad_phi_norm = pos(rng);
    in.dphi_x = d(rng);
    in.hess_phi_xx = d(rng);
    in.shape_xv_v = 0.0;
    in.dphi_sigma_v1v1 = 0.0;
    in.dphi_sigma_v2v2 = 0.0;
    in.v1_norm = pos(rng);
    in.v2_norm = pos(rng);
    in.v_norm = pos(rng);
    const auto w = sectional_curvatures(SectionalModel::warped_product, in);
    const auto g = sectional_curvatures(SectionalModel::general_vertical_warping, in);
    CHECK(rel_err(w.horizontal, g.horizontal) <= 1e-12);
    CHECK(rel_err(w.vertical, g.vertical) <= 1e-12);
    CHECK(rel_err(w.mixed, g.mixed) <= 1e-12);
  }
}

TEST_CASE("warped vertical curvature uses the Gram determinant") {
  SectionalInputs in;
  in.phi = 0.0;
  in.k_base_xy = 0.0;
  in.k_fiber_v1v2 = 0.0;
  in.grad_phi_norm = 1.0;
  in.dphi_x = 0.0;
  in.hess_phi_xx = 0.0;
  in.v_norm = 1.0;
  in.v1_norm = 1.0;
  in.v2_norm = 1.0;
  in.v1_dot_v2 = 1.0;  // parallel vectors span no plane
  CHECK(sectional_curvatures(SectionalModel::warped_product, in).vertical == 0.0);
  in.v1_dot_v2 = 0.0;
  CHECK(sectional_curvatures(SectionalModel::warped_product, in).vertical == -1.0);
}

TEST_CASE("sectional inputs are checked") {
  SectionalInputs in;
  in.phi = 0.0;
  try {
    sectional_curvatures(SectionalModel::canonical_variation, in);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("t") != std::string::npos);
  }
  in.t = 0.0;
  try {
    sectional_curvatures(SectionalModel::canonical_variation, in);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("K_B(X,Y)") != std::string::npos);
  }
  in.v1_dot_v2 = 0.5;
  CHECK_THROWS_AS(sectional_curvatures(SectionalModel::general_vertical_warping, in), DomainError);
}

TEST_CASE("second fundamental form of warped fibers") {
  const auto s = fiber_second_fundamental_form(std::exp(0.4), 0.5, 2.0);
  CHECK(s.along_gradient == doctest::Approx(-std::exp(0.4) * 0.5 * 2.0));
  CHECK(s.magnitude == doctest::Approx(std::exp(0.4)));
  CHECK(fiber_second_fundamental_form(1.0, 1.0, 0.0).magnitude == 0.0);
}
