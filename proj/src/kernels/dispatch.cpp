#include <cstdlib>
#include <string_view>

#include "mpersuade/kernels.hpp"

namespace mpersuade::kernels {

namespace {

Isa detect() noexcept {
  if (const char* forced = std::getenv("MP_SOLVER_SIMD");
      forced != nullptr && std::string_view(forced) == "scalar")
    return Isa::scalar;
  if (isa_available(Isa::avx2)) return Isa::avx2;
  return Isa::scalar;
}

}  // namespace

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(MPERSUADE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept {
  static const Isa isa = detect();
  return isa;
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

void poly_eval(std::span<const double> coeffs, std::span<const double> xs,
               std::span<double> out) {
#if defined(MPERSUADE_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::poly_eval(coeffs, xs, out);
#endif
  scalar::poly_eval(coeffs, xs, out);
}

void tangent_gap(std::span<const double> coeffs, std::span<const double> omegas,
                 std::span<const double> ms, std::span<double> out) {
#if defined(MPERSUADE_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::tangent_gap(coeffs, omegas, ms, out);
#endif
  scalar::tangent_gap(coeffs, omegas, ms, out);
}

}  // namespace mpersuade::kernels
