#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "pscal/error.hpp"
#include "pscal/geometry/base_manifold.hpp"
#include "pscal/geometry/field_io.hpp"
#include "pscal/geometry/grid_calculus.hpp"
#include "pscal/geometry/mesh_calculus.hpp"
#include "pscal/geometry/spectrum.hpp"

using namespace pscal;
using namespace pscal::geometry;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("pscal_test_geometry_" + name);
  fs::create_directories(p);
  return p;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TriMesh tetrahedron() {
  TriMesh m;
  m.vertices = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  m.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return m;
}

}  // namespace

TEST_CASE("icosphere counts and topology") {
  for (int level = 0; level <= 4; ++level) {
    const auto m = make_icosphere(level);
    const auto expected = 10 * (1 << (2 * level)) + 2;
    CHECK(m.vertices.size() == static_cast<std::size_t>(expected));
    const auto topo = check_closed_orientable(m);
    CHECK(topo.euler_characteristic == 2);
    CHECK(topo.genus == 0);
    for (const auto& v : m.vertices) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("mesh topology validation rejects defects") {
  auto tet = tetrahedron();
  CHECK(check_closed_orientable(tet).euler_characteristic == 2);

  auto open = tet;
  open.faces.pop_back();
  CHECK_THROWS_AS(check_closed_orientable(open), TopologyError);

  auto flipped = tet;
  std::swap(flipped.faces[0][1], flipped.faces[0][2]);
  CHECK_THROWS_AS(check_closed_orientable(flipped), TopologyError);

  auto degenerate = tet;
  degenerate.faces[0] = {0, 0, 1};
  CHECK_THROWS_AS(check_closed_orientable(degenerate), TopologyError);

  auto orphan = tet;
  orphan.vertices.emplace_back(5, 5, 5);
  CHECK_THROWS_AS(check_closed_orientable(orphan), TopologyError);

  CHECK_THROWS_AS(make_icosphere(-1), DomainError);
  CHECK_THROWS_AS(make_icosphere(1, 0.0), DomainError);
}

TEST_CASE("OFF and OBJ readers") {
  const auto dir = temp_dir("io");
  const auto sphere = make_icosphere(2, 1.5);
  write_off(sphere, dir / "s.off");
  const auto back = read_mesh(dir / "s.off");
  REQUIRE(back.vertices.size() == sphere.vertices.size());
  REQUIRE(back.faces == sphere.faces);
  for (std::size_t i = 0; i < back.vertices.size(); ++i) CHECK((back.vertices[i] - sphere.vertices[i]).norm() == 0.0);

  {
    std::ofstream obj(dir / "t.obj");
    obj << "# tetrahedron\n"
           "v 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\n"
           "f 1 2 3\nf 1/1 4/1 2/1\nf 1//1 3//1 4//1\nf 2 4 3\n";
  }
  const auto tet = read_mesh(dir / "t.obj");
  CHECK(tet.faces.size() == 4);
  CHECK(check_closed_orientable(tet).euler_characteristic == 2);

  CHECK_THROWS_AS(read_mesh(dir / "missing.off"), InputError);
  CHECK_THROWS_AS(read_mesh(dir / "x.ply"), InputError);
}

TEST_CASE("spectral differentiation is exact on resolved modes") {
  const double L = 3.0;
  GridCalculus g({L}, {17});
  const auto& pos = g.positions();
  const double kx = 2 * pi / L;
  for (int m = 0; m <= 8; ++m) {
    CAPTURE(m);
    std::vector<double> u(g.size()), du(g.size()), lap(g.size()), exact_d(g.size()), exact_l(g.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = pos[i][0];
      u[i] = std::sin(m * kx * x) + 0.5 * std::cos(m * kx * x);
      exact_d[i] = m * kx * (std::cos(m * kx * x) - 0.5 * std::sin(m * kx * x));
      exact_l[i] = -(m * kx) * (m * kx) * u[i];
    }
    g.derivative(0, u, du);
    g.laplacian(u, lap);
    CHECK(sup_diff(du, exact_d) <= 1e-11);
    CHECK(sup_diff(lap, exact_l) <= 1e-10);
  }
}

TEST_CASE("second-derivative matrix equals the square of the first") {
  for (int n : {3, 5, 9, 17}) {
    GridCalculus g({2.0}, {n});
    const auto& d1 = g.first_derivative(0);
    const auto& d2 = g.second_derivative(0);
    double err = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += d1[i * n + k] * d1[k * n + j];
        err = std::max(err, std::abs(s - d2[i * n + j]));
      }
    CHECK(err <= 1e-11);
  }
}

TEST_CASE("grid calculus in two and three axes") {
  GridCalculus g({2 * pi, 2 * pi}, {15, 17});
  const auto& pos = g.positions();
  std::vector<double> u(g.size()), lap(g.size()), gs(g.size()), k(g.size());
  std::vector<double> lap_exact(g.size()), gs_exact(g.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = pos[i][0], y = pos[i][1];
    u[i] = std::sin(x) * std::cos(2 * y);
    lap_exact[i] = -5.0 * u[i];
    gs_exact[i] = std::pow(std::cos(x) * std::cos(2 * y), 2) + std::pow(2 * std::sin(x) * std::sin(2 * y), 2);
  }
  g.laplacian(u, lap);
  g.grad_sq(u, gs);
  g.stiffness_apply(u, k);
  CHECK(sup_diff(lap, lap_exact) <= 1e-11);
  CHECK(sup_diff(gs, gs_exact) <= 1e-11);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(k[i] + g.weights()[i] * lap[i]) <= 1e-12);

  double wsum = 0.0;
  for (double w : g.weights()) wsum += w;
  CHECK(wsum == doctest::Approx(4 * pi * pi).epsilon(1e-14));

  GridCalculus g3({1.0, 2.0, 3.0}, {5, 7, 9});
  CHECK(g3.size() == 315);
  CHECK(g3.mesh_size() == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(GridCalculus({1.0}, {4}), DomainError);
  CHECK_THROWS_AS(GridCalculus({1.0, 1.0, 1.0, 1.0}, {3, 3, 3, 3}), UnsupportedError);
  CHECK_THROWS_AS(GridCalculus({-1.0}, {5}), DomainError);
}

TEST_CASE("cotangent calculus identities") {
  MeshCalculus m(make_icosphere(3), 1.0);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> d;
  std::vector<double> u(m.size()), lap(m.size()), gs(m.size()), k(m.size());
  for (auto& x : u) x = d(rng);
  m.laplacian(u, lap);
  m.grad_sq(u, gs);
  m.stiffness_apply(u, k);
  double energy = 0.0, quad = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    energy += m.weights()[i] * gs[i];
    quad += u[i] * k[i];
    scale = std::max(scale, std::abs(k[i]));
    CHECK(std::abs(k[i] + m.weights()[i] * lap[i]) <= 1e-12 * std::max(1.0, std::abs(k[i])));
  }
  CHECK(energy == doctest::Approx(quad).epsilon(1e-12));

  double wsum = 0.0;
  for (double w : m.weights()) wsum += w;
  CHECK(wsum == doctest::Approx(4 * pi).epsilon(1e-12));
  CHECK(m.surface_area() < 4 * pi);

  std::vector<double> c(m.size(), 2.5), out(m.size());
  m.laplacian(c, out);
  for (double v : out) CHECK(v == 0.0);
  m.grad_sq(c, out);
  for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("cotangent Laplacian of the linear harmonic converges to -2 z") {
  double prev = 0.0;
  for (int level = 2; level <= 5; ++level) {
    MeshCalculus m(make_icosphere(level), 1.0);
    std::vector<double> z(m.size()), lap(m.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = m.positions()[i][2];
    m.laplacian(z, lap);
    double l2 = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) l2 += m.weights()[i] * std::pow(lap[i] + 2.0 * z[i], 2);
    l2 = std::sqrt(l2);
    if (level > 2) CHECK(l2 < prev);
    prev = l2;
  }
  CHECK(prev < 0.02);
}

TEST_CASE("angle-defect scalar curvature on spheres") {
  for (double r : {1.0, 2.0}) {
    MeshCalculus m(make_icosphere(4, r), r);
    const auto scal = m.angle_defect_scalar_curvature();
    for (double s : scal) CHECK(s == doctest::Approx(2.0 / (r * r)).epsilon(0.02));
  }
}

TEST_CASE("first eigenvalue: spectral torus and circle are exact") {
  GridCalculus t({2 * pi, 2 * pi}, {17, 17});
  CHECK(first_eigenpair(t).value == doctest::Approx(1.0).epsilon(1e-10));
  GridCalculus t2({3.0, 5.0}, {15, 21});
  CHECK(first_eigenpair(t2).value == doctest::Approx(std::pow(2 * pi / 5.0, 2)).epsilon(1e-10));

  const auto circle = build_base(RoundSphere{1, 2.0, 4, 33});
  CHECK(discrete_first_eigenpair(circle).value == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(first_eigenvalue(circle) == doctest::Approx(0.25));
}

TEST_CASE("first eigenvalue of the icosphere approaches n") {
  const auto s = build_base(RoundSphere{2, 1.0, 4, 65});
  const auto ep = discrete_first_eigenpair(s);
  CHECK(std::abs(ep.value - 2.0) / 2.0 < 0.02);
  CHECK(ep.residual <= 1e-10);
  // Deterministic start vector.
  CHECK(discrete_first_eigenpair(s).value == ep.value);
  // The eigenvector is W-orthogonal to constants and W-normalized.
  double mean = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < ep.vector.size(); ++i) {
    mean += s.weights()[i] * ep.vector[i];
    norm += s.weights()[i] * ep.vector[i] * ep.vector[i];
  }
  CHECK(std::abs(mean) <= 1e-10);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rayleigh_quotient(s.calculus(), ep.vector) == doctest::Approx(ep.value).epsilon(1e-8));

  const auto big = build_base(RoundSphere{2, 3.0, 3, 65});
  CHECK(discrete_first_eigenpair(big).value * 9.0 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("analytic constants of the backends") {
  const auto s2 = build_base(RoundSphere{2, 2.0, 3, 65});
  CHECK(s2.backend() == Backend::mesh);
  CHECK(s2.analytic());
  CHECK(volume(s2) == doctest::Approx(16 * pi));
  CHECK(first_eigenvalue(s2) == doctest::Approx(0.5));
  CHECK(*ricci_lower_bound(s2) == doctest::Approx(0.25));
  CHECK(scalar_curvature_field(s2).max() == doctest::Approx(0.5));

  const auto s3 = build_base(RoundSphere{3, 1.0, 4, 65});
  CHECK(s3.backend() == Backend::constants_only);
  CHECK(s3.node_count() == 1);
  CHECK(volume(s3) == doctest::Approx(2 * pi * pi));
  CHECK(first_eigenvalue(s3) == doctest::Approx(3.0));
  CHECK(scalar_curvature_field(s3)[0] == doctest::Approx(6.0));
  CHECK_THROWS_AS(discrete_first_eigenpair(s3), UnsupportedError);

  const auto s4 = build_base(RoundSphere{4, 1.0, 4, 65});
  CHECK(volume(s4) == doctest::Approx(8 * pi * pi / 3));

  const auto torus = build_base(FlatTorus{{2 * pi, pi}, {}});
  CHECK(torus.backend() == Backend::spectral_grid);
  CHECK(volume(torus) == doctest::Approx(2 * pi * pi));
  CHECK(first_eigenvalue(torus) == doctest::Approx(1.0));
  CHECK(*ricci_lower_bound(torus) == 0.0);
  CHECK(scalar_curvature_field(torus).max() == 0.0);

  ProductSpec prod;
  prod.factors = {RoundSphere{1, 1.0, 4, 17}, FlatTorus{{pi}, {9}}};
  const auto p = build_base(prod);
  CHECK(p.dimension() == 2);
  CHECK(p.backend() == Backend::spectral_grid);
  CHECK(volume(p) == doctest::Approx(2 * pi * pi));
  CHECK(first_eigenvalue(p) == doctest::Approx(1.0));
  CHECK(discrete_first_eigenpair(p).value == doctest::Approx(1.0).epsilon(1e-10));

  ProductSpec s2xs1;
  s2xs1.factors = {RoundSphere{2, 1.0, 2, 65}, RoundSphere{1, 1.0, 4, 17}};
  const auto q = build_base(s2xs1);
  CHECK(q.backend() == Backend::constants_only);
  CHECK(q.dimension() == 3);
  CHECK(volume(q) == doctest::Approx(8 * pi * pi));
  CHECK(scalar_curvature_field(q)[0] == doctest::Approx(2.0));
  CHECK(first_eigenvalue(q) == doctest::Approx(1.0));
  CHECK(*ricci_lower_bound(q) == 0.0);

  ProductSpec with_mesh;
  with_mesh.factors = {MeshSurface{make_icosphere(1)}, RoundSphere{1, 1.0, 4, 17}};
  CHECK_THROWS_AS(build_base(with_mesh), UnsupportedError);

  CHECK_THROWS_AS(build_base(RoundSphere{2, 1.0, 9, 65}), DomainError);
  CHECK_THROWS_AS(build_base(RoundSphere{2, -1.0, 3, 65}), DomainError);
  CHECK_THROWS_AS(build_base(FlatTorus{{}, {}}), DomainError);
}

TEST_CASE("mesh surfaces use discrete constants") {
  const auto b = build_base(MeshSurface{make_icosphere(3, 1.0)});
  CHECK(b.backend() == Backend::mesh);
  CHECK_FALSE(b.analytic());
  CHECK_FALSE(ricci_lower_bound(b).has_value());
  CHECK(volume(b) < 4 * pi);
  CHECK(volume(b) == doctest::Approx(4 * pi).epsilon(0.02));
  CHECK(first_eigenvalue(b) == doctest::Approx(2.0).epsilon(0.05));
  const auto scal = scalar_curvature_field(b);
  CHECK(scal.min() > 1.8);
  CHECK(scal.max() < 2.2);
}

TEST_CASE("scalar fields validate length, finiteness and base") {
  const auto a = build_base(FlatTorus{{1.0}, {5}});
  const auto b = build_base(FlatTorus{{1.0}, {5}});
  CHECK_THROWS_AS(ScalarField(a, std::vector<double>(4, 1.0)), MismatchError);
  CHECK_THROWS_AS(ScalarField(a, std::vector<double>{1, 2, NAN, 4, 5}), DomainError);
  const auto u = constant_field(a, 2.0);
  CHECK_NOTHROW(require_on(a, u));
  CHECK_THROWS_AS(require_on(b, u), MismatchError);
  CHECK(integrate(a, u) == doctest::Approx(2.0));
  const auto s = sample_field(a, [](const auto& p) { return std::sin(2 * pi * p[0]); });
  const auto lap = laplacian(a, s);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(lap[i] + 4 * pi * pi * s[i]) <= 1e-10);
  CHECK(gradient_sq_norm(a, constant_field(a, 1.0)).max() == 0.0);
}

TEST_CASE("field CSV round trip and validation") {
  const auto dir = temp_dir("csv");
  const auto b = build_base(FlatTorus{{2 * pi}, {9}});
  const auto u = sample_field(b, [](const auto& p) { return std::exp(std::sin(p[0])) / 3.0; });
  write_field_csv(u, dir / "u.csv");
  const auto back = read_field_csv(b, dir / "u.csv");
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(back[i] == u[i]);

  {
    std::ofstream out(dir / "shuffled.csv");
    out << "value,node_id\n";
    for (std::size_t i = u.size(); i-- > 0;) out << format_real(u[i]) << ',' << i << '\n';
  }
  const auto sh = read_field_csv(b, dir / "shuffled.csv");
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(sh[i] == u[i]);

  {
    std::ofstream out(dir / "dup.csv");
    out << "node_id,value\n";
    for (std::size_t i = 0; i < u.size(); ++i) out << (i == 3 ? 2 : i) << ",1\n";
  }
  CHECK_THROWS_AS(read_field_csv(b, dir / "dup.csv"), InputError);
  {
    std::ofstream out(dir / "short.csv");
    out << "node_id,value\n0,1\n1,1\n";
  }
  CHECK_THROWS_AS(read_field_csv(b, dir / "short.csv"), MismatchError);
  {
    std::ofstream out(dir / "nohdr.csv");
    out << "id,v\n0,1\n";
  }
  CHECK_THROWS_AS(read_field_csv(b, dir / "nohdr.csv"), InputError);
  CHECK_THROWS_AS(read_field_csv(b, dir / "absent.csv"), InputError);

  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}
