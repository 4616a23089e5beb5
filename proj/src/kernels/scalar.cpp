#include "mpersuade/kernels.hpp"

#include "point.hpp"

namespace mpersuade::kernels::scalar {

void poly_eval(std::span<const double> coeffs, std::span<const double> xs,
               std::span<double> out) {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = detail::horner(coeffs, xs[i]);
}

void tangent_gap(std::span<const double> coeffs, std::span<const double> omegas,
                 std::span<const double> ms, std::span<double> out) {
  for (std::size_t i = 0; i < omegas.size(); ++i)
    out[i] = detail::tangent_gap(coeffs, omegas[i], ms[i]);
}

}  // namespace mpersuade::kernels::scalar
