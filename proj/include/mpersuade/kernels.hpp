#pragma once

// Batch kernels for the polynomial objectives used throughout the solvers.
//
// Every kernel exists as a scalar reference and, on x86-64, an AVX2 variant.
// The element-wise kernels perform the same operations in the same order in
// every variant (no FMA), so all variants are bit-identical; the dispatching
// entry points pick the widest variant the CPU supports at first use.
// Setting MP_SOLVER_SIMD=scalar in the environment forces the reference path.

#include <span>
#include <string_view>

namespace mpersuade::kernels {

enum class Isa { scalar, avx2 };

bool isa_available(Isa isa) noexcept;
Isa active_isa() noexcept;
std::string_view isa_name(Isa isa) noexcept;

// out[i] = sum_k coeffs[k] * xs[i]^k  (coefficients in ascending order).
void poly_eval(std::span<const double> coeffs, std::span<const double> xs,
               std::span<double> out);

// out[i] = V(omegas[i]) - V(ms[i]) - V'(ms[i]) * (omegas[i] - ms[i]) for the
// polynomial V with the given coefficients. Evaluated in the factored form
// (omega - m)^2 * sum_{k>=2} c_k sum_{s=0}^{k-2} (s+1) m^s omega^(k-2-s), so the
// result carries no cancellation error and ignores c_0, c_1 exactly.
void tangent_gap(std::span<const double> coeffs, std::span<const double> omegas,
                 std::span<const double> ms, std::span<double> out);

namespace scalar {
void poly_eval(std::span<const double> coeffs, std::span<const double> xs,
               std::span<double> out);
void tangent_gap(std::span<const double> coeffs, std::span<const double> omegas,
                 std::span<const double> ms, std::span<double> out);
}  // namespace scalar

#if defined(MPERSUADE_HAVE_AVX2)
namespace avx2 {
void poly_eval(std::span<const double> coeffs, std::span<const double> xs,
               std::span<double> out);
void tangent_gap(std::span<const double> coeffs, std::span<const double> omegas,
                 std::span<const double> ms, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace mpersuade::kernels
