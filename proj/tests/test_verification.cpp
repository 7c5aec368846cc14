#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "pscal/error.hpp"
#include "pscal/verification/verify.hpp"

using namespace pscal;
using namespace pscal::verification;
using geometry::BaseManifold;
using geometry::ScalarField;
constexpr double pi = std::numbers::pi;

namespace {

BaseManifold torus(int n = 33) { return geometry::build_base(geometry::FlatTorus{{2 * pi, 2 * pi}, {n, n}}); }

FiberSpec make_fiber(int k, double c) { return FiberSpec{k, c, std::nullopt}; }

ScalarField smooth_positive(const BaseManifold& b, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 0.25);
  const double a0 = d(rng), a1 = d(rng), a2 = d(rng), a3 = d(rng);
  return geometry::sample_field(b, [&](const auto& p) {
    return std::exp(a0 + a1 * std::sin(p[0]) + a2 * std::cos(p[1] - 0.3) + a3 * std::sin(p[0] + p[1]));
  });
}

}  // namespace

TEST_CASE("convergence orders from synthetic errors") {
  const auto pts = convergence_orders({{0.4, 0.16}, {0.2, 0.04}, {0.1, 0.01}});
  REQUIRE(pts.size() == 3);
  CHECK(std::isnan(pts[0].order));
  CHECK(pts[1].order == doctest::Approx(2.0));
  CHECK(pts[2].order == doctest::Approx(2.0));

  const auto dir = std::filesystem::temp_directory_path() / "pscal_test_verification";
  std::filesystem::create_directories(dir);
  write_convergence_csv(pts, dir / "conv.csv");
  std::ifstream in(dir / "conv.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "h,error,order");
}

TEST_CASE("change-of-variables identity is exact on spectral backends") {
  std::mt19937_64 rng(51);
  const auto b = torus();
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = smooth_positive(b, rng);
    const auto f = smooth_positive(b, rng);
    const auto fiber = make_fiber(2 + trial % 5, -1.0 + 0.1 * trial);
    const double dev = cross_check_identity(b, u, fiber, f, geometry::scalar_curvature_field(b));
    CHECK(dev <= 1e-10);
  }
}

// The sup-norm error is first order on icospheres: vertex stars along the
// edges of the base icosahedron are not centrally symmetric.
TEST_CASE("change-of-variables identity converges on icospheres") {
  const auto fiber = make_fiber(3, 0.0);
  auto u_fn = [](const std::array<double, 3>& p) { return std::exp(0.3 * p[2] + 0.2 * p[0] * p[1]); };
  auto f_fn = [](const std::array<double, 3>& p) { return 2.0 + p[0]; };
  const auto pts = identity_convergence_study({2, 3, 4, 5}, fiber, u_fn, f_fn);
  REQUIRE(pts.size() == 4);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    MESSAGE("h = " << pts[i].h << ", error = " << pts[i].error << ", order = " << pts[i].order);
    CHECK(pts[i].error < pts[i - 1].error);
    CHECK(pts[i].order >= 0.9);
  }
}

TEST_CASE("verification of the torus constant solution") {
  const auto b = torus(17);
  const auto fiber = make_fiber(3, -6.0);
  const auto f = geometry::constant_field(b, -3.0);
  const auto prob = solver::Problem::product(b, fiber, f);
  const auto sol = solver::minimize(prob);
  const auto rep = verify_prescription(b, sol, f, fiber, std::nullopt);
  CHECK(rep.pass);
  CHECK(rep.reasons.empty());
  CHECK(rep.sup_residual <= 1e-10);
  CHECK(rep.phi_form_sup_residual <= 1e-10);
  CHECK(rep.floor_nodes == 0);

  // Tampering one node breaks the prescription.
  std::vector<double> v(sol.u.values());
  v[5] *= 2.0;
  const auto tampered = solver::evaluate_solution(prob, ScalarField(b, v));
  const auto bad = verify_prescription(b, tampered, f, fiber, std::nullopt);
  CHECK_FALSE(bad.pass);
  CHECK(bad.sup_residual > 1e-2);
  CHECK_FALSE(bad.reasons.empty());
}

TEST_CASE("verification rejects a solution with a binding integral constraint") {
  const auto b = torus(9);
  const auto fiber = make_fiber(3, 0.0);
  const auto f = geometry::constant_field(b, -1.0);
  const auto sol = solver::minimize(solver::Problem::product(b, fiber, f));
  REQUIRE(sol.integral_active);
  const auto rep = verify_prescription(b, sol, f, fiber, std::nullopt);
  CHECK_FALSE(rep.pass);
  bool named = false;
  for (const auto& r : rep.reasons) named = named || r.find("multiplier") != std::string::npos;
  CHECK(named);
}

TEST_CASE("verification in general mode") {
  const auto b = torus(11);
  const auto fiber = make_fiber(4, -1.0);
  const auto scal_g = geometry::sample_field(b, [](const auto& p) { return 0.3 * std::cos(p[0]); });
  const auto sub = curvature::SubmersionData::from_tensors(
      scal_g, geometry::constant_field(b, 0.1), geometry::constant_field(b, 0.25), geometry::constant_field(b, 0.0));
  const auto f = geometry::sample_field(b, [](const auto& p) { return -1.5 + 0.2 * std::sin(p[1]); });
  const auto sol = solver::minimize(solver::Problem::general(b, fiber, f, sub));
  const auto rep = verify_prescription(b, sol, f, fiber, sub);
  CHECK(rep.pass);
  CHECK(rep.sup_residual <= 1e-6);
  CHECK(rep.gradient_check_max <= 1e-8);
}

TEST_CASE("discretization thresholds") {
  const Thresholds t;
  CHECK(t.discretization(torus(9)) == 1e-8);
  const auto s = geometry::build_base(geometry::RoundSphere{2, 1.0, 3, 65});
  CHECK(t.discretization(s) == doctest::Approx(10.0 * s.mesh_size() * s.mesh_size()));
}

TEST_CASE("Poincare audit") {
  for (const auto& b : {torus(17), geometry::build_base(geometry::RoundSphere{2, 1.0, 3, 65})}) {
    const auto audit = poincare_audit(b, 1000);
    CHECK(audit.samples == 1000);
    CHECK(audit.corrected_violations == 0);
    CHECK(audit.corrected_min_ratio >= 1.0 - 1e-9);
    CHECK(audit.constant_violates_printed);
    CHECK(audit.printed_violations >= 1);
    CHECK(audit.printed_worst_ratio < 1.0);
    CHECK(audit.eigenfunction_ratio == doctest::Approx(1.0).epsilon(1e-8));
  }
}
