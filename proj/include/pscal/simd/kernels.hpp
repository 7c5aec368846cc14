#pragma once

// Field-arithmetic inner loops. Every kernel has a portable scalar reference
// implementation; an AVX2/FMA variant is compiled on x86-64 and picked at
// runtime when the CPU supports it. Set PSCAL_SIMD=scalar (or avx2) in the
// environment to force a variant.
//
// The "diff" kernels evaluate sums of the form sum_j a_ij (x_j - x_i) so that
// constant inputs produce exactly zero output.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pscal::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;

  /// sum_i a_i b_i
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// sum_i w_i a_i b_i
  double (*weighted_dot)(const double* w, const double* a, const double* b, std::size_t n);
  /// y += alpha x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// y += x * x (elementwise)
  void (*add_square)(const double* x, double* y, std::size_t n);
  /// y = A x, A dense row-major n x n
  void (*dense_apply)(const double* a, const double* x, double* y, std::size_t n);
  /// y_i = sum_j A_ij (x_j - x_i), A dense row-major n x n
  void (*dense_diff_apply)(const double* a, const double* x, double* y, std::size_t n);
  /// y_i = sum_{j in row i} v_ij (x_j - x_i)
  void (*csr_diff_apply)(const std::int32_t* row_ptr, const std::int32_t* cols, const double* vals,
                         const double* x, double* y, std::size_t rows);
  /// y_i = sum_{j in row i} v_ij (x_j - x_i)^2
  void (*csr_diff_sq)(const std::int32_t* row_ptr, const std::int32_t* cols, const double* vals,
                      const double* x, double* y, std::size_t rows);
};

/// Kernel table chosen for this process (resolved once, thread-safe).
const KernelTable& active();

/// True when the variant is compiled in and supported by the running CPU.
bool available(Isa isa);

/// Table for a specific variant; throws UnsupportedError when unavailable.
const KernelTable& table(Isa isa);

std::string_view name(Isa isa);

namespace detail {
const KernelTable& scalar_table();
#if defined(PSCAL_HAVE_AVX2_KERNELS)
const KernelTable& avx2_table();
#endif
}  // namespace detail

}  // namespace pscal::simd
