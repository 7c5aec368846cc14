// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "pscal/simd/kernels.hpp"

namespace pscal::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_dot(const double* w, const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wa = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i));
    acc = _mm256_fmadd_pd(wa, _mm256_loadu_pd(b + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void add_square(const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vx, vx, _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += x[i] * x[i];
}

void dense_apply(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t r = 0; r < n; ++r) y[r] = dot(a + r * n, x, n);
}

void dense_diff_apply(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = a + r * n;
    const double xr = x[r];
    const __m256d vxr = _mm256_set1_pd(xr);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + j), vxr);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), d, acc);
    }
    double s = hsum(acc);
    for (; j < n; ++j) s += row[j] * (x[j] - xr);
    y[r] = s;
  }
}

void csr_diff_apply(const std::int32_t* row_ptr, const std::int32_t* cols, const double* vals,
                    const double* x, double* y, std::size_t rows) {
  for (std::size_t i = 0; i < rows; ++i) {
    const __m256d vxi = _mm256_set1_pd(x[i]);
    __m256d acc = _mm256_setzero_pd();
    std::int32_t p = row_ptr[i];
    const std::int32_t end = row_ptr[i + 1];
    for (; p + 4 <= end; p += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + p));
      const __m256d xj = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + p), _mm256_sub_pd(xj, vxi), acc);
    }
    double s = hsum(acc);
    for (; p < end; ++p) s += vals[p] * (x[cols[p]] - x[i]);
    y[i] = s;
  }
}

void csr_diff_sq(const std::int32_t* row_ptr, const std::int32_t* cols, const double* vals,
                 const double* x, double* y, std::size_t rows) {
  for (std::size_t i = 0; i < rows; ++i) {
    const __m256d vxi = _mm256_set1_pd(x[i]);
    __m256d acc = _mm256_setzero_pd();
    std::int32_t p = row_ptr[i];
    const std::int32_t end = row_ptr[i + 1];
    for (; p + 4 <= end; p += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + p));
      const __m256d d = _mm256_sub_pd(_mm256_i32gather_pd(x, idx, 8), vxi);
      acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(vals + p), d), d, acc);
    }
    double s = hsum(acc);
    for (; p < end; ++p) {
      const double d = x[cols[p]] - x[i];
      s += vals[p] * d * d;
    }
    y[i] = s;
  }
}

constexpr KernelTable kAvx2{Isa::avx2,  dot,         weighted_dot,   axpy,       add_square,
                            dense_apply, dense_diff_apply, csr_diff_apply, csr_diff_sq};

}  // namespace

namespace detail {
const KernelTable& avx2_table() { return kAvx2; }
}  // namespace detail

}  // namespace pscal::simd
