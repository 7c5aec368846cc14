#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pscal/error.hpp"
#include "pscal/simd/kernels.hpp"

using namespace pscal::simd;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Random sparse pattern without self loops.
struct Csr {
  std::vector<std::int32_t> row_ptr{0};
  std::vector<std::int32_t> cols;
  std::vector<double> vals;
};

Csr random_csr(std::size_t rows, std::mt19937_64& rng) {
  Csr m;
  std::uniform_int_distribution<int> count(0, 9);
  std::uniform_int_distribution<int> col(0, static_cast<int>(rows) - 1);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (std::size_t i = 0; i < rows; ++i) {
    const int c = count(rng);
    for (int j = 0; j < c; ++j) {
      m.cols.push_back(col(rng));
      m.vals.push_back(val(rng));
    }
    m.row_ptr.push_back(static_cast<std::int32_t>(m.cols.size()));
  }
  return m;
}

}  // namespace

TEST_CASE("scalar kernels are always available") {
  CHECK(available(Isa::scalar));
  CHECK(table(Isa::scalar).isa == Isa::scalar);
  CHECK(name(Isa::scalar) == "scalar");
}

TEST_CASE("scalar reference kernels match naive loops") {
  std::mt19937_64 rng(1);
  const std::size_t n = 37;
  const auto a = random_vector(n, rng), b = random_vector(n, rng), w = random_vector(n, rng);
  const auto& k = table(Isa::scalar);
  double dot = 0.0, wdot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    wdot += w[i] * a[i] * b[i];
  }
  CHECK(k.dot(a.data(), b.data(), n) == doctest::Approx(dot).epsilon(1e-14));
  CHECK(k.weighted_dot(w.data(), a.data(), b.data(), n) == doctest::Approx(wdot).epsilon(1e-14));

  const auto m = random_vector(n * n, rng);
  std::vector<double> y(n), yd(n);
  k.dense_apply(m.data(), a.data(), y.data(), n);
  k.dense_diff_apply(m.data(), a.data(), yd.data(), n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0, sd = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s += m[i * n + j] * a[j];
      sd += m[i * n + j] * (a[j] - a[i]);
    }
    CHECK(y[i] == doctest::Approx(s).epsilon(1e-13));
    CHECK(yd[i] == doctest::Approx(sd).epsilon(1e-13));
  }
}

TEST_CASE("diff kernels vanish exactly on constants") {
  std::mt19937_64 rng(2);
  const std::size_t n = 41;
  const auto m = random_vector(n * n, rng);
  const std::vector<double> x(n, 3.7);
  const auto csr = random_csr(n, rng);
  for (Isa isa : {Isa::scalar, Isa::avx2}) {
    if (!available(isa)) continue;
    const auto& k = table(isa);
    std::vector<double> y(n, 1.0);
    k.dense_diff_apply(m.data(), x.data(), y.data(), n);
    for (double v : y) CHECK(v == 0.0);
    k.csr_diff_apply(csr.row_ptr.data(), csr.cols.data(), csr.vals.data(), x.data(), y.data(), n);
    for (double v : y) CHECK(v == 0.0);
    k.csr_diff_sq(csr.row_ptr.data(), csr.cols.data(), csr.vals.data(), x.data(), y.data(), n);
    for (double v : y) CHECK(v == 0.0);
  }
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  if (!available(Isa::avx2)) {
    MESSAGE("AVX2 variant not available on this machine; equivalence test skipped");
    return;
  }
  const auto& s = table(Isa::scalar);
  const auto& v = table(Isa::avx2);
  CHECK(v.isa == Isa::avx2);
  std::mt19937_64 rng(3);
  // Lengths cover empty input, remainders of every width and long vectors.
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 33u, 65u, 257u, 1001u}) {
    CAPTURE(n);
    const auto a = random_vector(n, rng), b = random_vector(n, rng), w = random_vector(n, rng);
    const double tol = 1e-14 * std::max<std::size_t>(n, 1);
    CHECK(std::abs(s.dot(a.data(), b.data(), n) - v.dot(a.data(), b.data(), n)) <= tol);
    CHECK(std::abs(s.weighted_dot(w.data(), a.data(), b.data(), n) - v.weighted_dot(w.data(), a.data(), b.data(), n)) <=
          tol);

    std::vector<double> y1 = b, y2 = b;
    s.axpy(0.75, a.data(), y1.data(), n);
    v.axpy(0.75, a.data(), y2.data(), n);
    CHECK(max_abs_diff(y1, y2) <= 1e-15);

    y1 = b;
    y2 = b;
    s.add_square(a.data(), y1.data(), n);
    v.add_square(a.data(), y2.data(), n);
    CHECK(max_abs_diff(y1, y2) <= 1e-15);

    if (n == 0 || n > 257) continue;
    const auto m = random_vector(n * n, rng);
    std::vector<double> z1(n), z2(n);
    s.dense_apply(m.data(), a.data(), z1.data(), n);
    v.dense_apply(m.data(), a.data(), z2.data(), n);
    CHECK(max_abs_diff(z1, z2) <= tol);
    s.dense_diff_apply(m.data(), a.data(), z1.data(), n);
    v.dense_diff_apply(m.data(), a.data(), z2.data(), n);
    CHECK(max_abs_diff(z1, z2) <= tol);

    const auto csr = random_csr(n, rng);
    s.csr_diff_apply(csr.row_ptr.data(), csr.cols.data(), csr.vals.data(), a.data(), z1.data(), n);
    v.csr_diff_apply(csr.row_ptr.data(), csr.cols.data(), csr.vals.data(), a.data(), z2.data(), n);
    CHECK(max_abs_diff(z1, z2) <= 1e-13);
    s.csr_diff_sq(csr.row_ptr.data(), csr.cols.data(), csr.vals.data(), a.data(), z1.data(), n);
    v.csr_diff_sq(csr.row_ptr.data(), csr.cols.data(), csr.vals.data(), a.data(), z2.data(), n);
    CHECK(max_abs_diff(z1, z2) <= 1e-13);
  }
}

TEST_CASE("requesting an unavailable variant throws") {
  if (available(Isa::avx2)) {
    CHECK_NOTHROW(table(Isa::avx2));
  } else {
    CHECK_THROWS_AS(table(Isa::avx2), pscal::UnsupportedError);
  }
}
