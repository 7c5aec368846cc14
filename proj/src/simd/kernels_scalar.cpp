#include "pscal/simd/kernels.hpp"

namespace pscal::simd {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double weighted_dot(const double* w, const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void add_square(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += x[i] * x[i];
}

void dense_apply(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = a + i * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void dense_diff_apply(const double* a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = a + i * n;
    const double xi = x[i];
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * (x[j] - xi);
    y[i] = s;
  }
}

void csr_diff_apply(const std::int32_t* row_ptr, const std::int32_t* cols, const double* vals,
                    const double* x, double* y, std::size_t rows) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double xi = x[i];
    double s = 0.0;
    for (std::int32_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += vals[p] * (x[cols[p]] - xi);
    y[i] = s;
  }
}

void csr_diff_sq(const std::int32_t* row_ptr, const std::int32_t* cols, const double* vals,
                 const double* x, double* y, std::size_t rows) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double xi = x[i];
    double s = 0.0;
    for (std::int32_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      const double d = x[cols[p]] - xi;
      s += vals[p] * d * d;
    }
    y[i] = s;
  }
}

constexpr KernelTable kScalar{Isa::scalar, dot,         weighted_dot,   axpy,       add_square,
                              dense_apply, dense_diff_apply, csr_diff_apply, csr_diff_sq};

}  // namespace

namespace detail {
const KernelTable& scalar_table() { return kScalar; }
}  // namespace detail

}  // namespace pscal::simd
