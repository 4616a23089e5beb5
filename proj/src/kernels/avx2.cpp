#include <immintrin.h>

#include "mpersuade/kernels.hpp"
#include "point.hpp"

namespace mpersuade::kernels::avx2 {

namespace {
constexpr std::size_t kLanes = 4;
}

void poly_eval(std::span<const double> coeffs, std::span<const double> xs,
               std::span<double> out) {
  const std::size_t n = xs.size();
  std::size_t i = 0;
  if (!coeffs.empty()) {
    const std::size_t top = coeffs.size() - 1;
    for (; i + kLanes <= n; i += kLanes) {
      const __m256d x = _mm256_loadu_pd(xs.data() + i);
      __m256d acc = _mm256_set1_pd(coeffs[top]);
      for (std::size_t k = top; k-- > 0;)
        acc = _mm256_add_pd(_mm256_mul_pd(acc, x), _mm256_set1_pd(coeffs[k]));
      _mm256_storeu_pd(out.data() + i, acc);
    }
  }
  for (; i < n; ++i) out[i] = detail::horner(coeffs, xs[i]);
}

void tangent_gap(std::span<const double> coeffs, std::span<const double> omegas,
                 std::span<const double> ms, std::span<double> out) {
  const std::size_t n = omegas.size();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d w = _mm256_loadu_pd(omegas.data() + i);
    const __m256d m = _mm256_loadu_pd(ms.data() + i);
    __m256d h = _mm256_set1_pd(1.0);
    __m256d mp = _mm256_set1_pd(1.0);
    __m256d inner = _mm256_setzero_pd();
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 2; k < coeffs.size(); ++k) {
      if (k > 2) {
        mp = _mm256_mul_pd(mp, m);
        h = _mm256_add_pd(_mm256_mul_pd(h, w), mp);
      }
      inner = _mm256_add_pd(_mm256_mul_pd(inner, m), h);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(coeffs[k]), inner));
    }
    const __m256d d = _mm256_sub_pd(w, m);
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(_mm256_mul_pd(d, d), acc));
  }
  for (; i < n; ++i) out[i] = detail::tangent_gap(coeffs, omegas[i], ms[i]);
}

}  // namespace mpersuade::kernels::avx2
