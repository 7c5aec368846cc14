#include <cstdlib>
#include <string>

#include "pscal/error.hpp"
#include "pscal/simd/kernels.hpp"

namespace pscal::simd {

namespace {

bool cpu_has_avx2() {
#if defined(PSCAL_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& resolve() {
  const char* env = std::getenv("PSCAL_SIMD");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return detail::scalar_table();
  if (choice == "avx2") return table(Isa::avx2);
  return available(Isa::avx2) ? table(Isa::avx2) : detail::scalar_table();
}

}  // namespace

bool available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!available(isa))
    throw UnsupportedError("SIMD variant '" + std::string(name(isa)) +
                           "' is not available on this build or CPU");
#if defined(PSCAL_HAVE_AVX2_KERNELS)
  if (isa == Isa::avx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

const KernelTable& active() {
  static const KernelTable& chosen = resolve();
  return chosen;
}

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace pscal::simd
