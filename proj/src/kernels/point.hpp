#pragma once

// Single-point reference arithmetic shared by the scalar kernels and the
// tails of the vector kernels. The vector loops mirror these operations lane
// by lane; keep the two in sync.

#include <cstddef>
#include <span>

namespace mpersuade::kernels::detail {

inline double horner(std::span<const double> c, double x) {
  if (c.empty()) return 0.0;
  double acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * x + c[k];
  return acc;
}

// h carries sum_{s<=k-2} m^s w^(k-2-s); inner carries the weighted sum S_k,
// using S_k = m * S_{k-1} + h_{k-2}.
inline double tangent_gap(std::span<const double> c, double w, double m) {
  double h = 1.0;
  double mp = 1.0;
  double inner = 0.0;
  double acc = 0.0;
  for (std::size_t k = 2; k < c.size(); ++k) {
    if (k > 2) {
      mp = mp * m;
      h = h * w + mp;
    }
    inner = inner * m + h;
    acc = acc + c[k] * inner;
  }
  const double d = w - m;
  return (d * d) * acc;
}

}  // namespace mpersuade::kernels::detail
