#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string_view>
#include <vector>

#include "mpersuade/kernels.hpp"
#include "mpersuade/objective.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace k = mpersuade::kernels;

namespace {

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

std::vector<double> random_coeffs(gen::Rng& rng, int degree) {
  std::vector<double> c(degree + 1);
  for (double& x : c) x = rng.uniform(-10.0, 10.0);
  return c;
}

std::vector<double> random_points(gen::Rng& rng, std::size_t n) {
  std::vector<double> xs(n);
  for (double& x : xs) x = rng.uniform();
  return xs;
}

}  // namespace

TEST_CASE("dispatch honours MP_SOLVER_SIMD") {
  const char* forced = std::getenv("MP_SOLVER_SIMD");
  if (forced != nullptr && std::string_view(forced) == "scalar") {
    CHECK(k::active_isa() == k::Isa::scalar);
  } else {
    CHECK(k::active_isa() == (k::isa_available(k::Isa::avx2) ? k::Isa::avx2 : k::Isa::scalar));
  }
  CHECK(k::isa_available(k::Isa::scalar));
  MESSAGE("active kernel: " << k::isa_name(k::active_isa()));
}

TEST_CASE("dispatched kernels are bit-identical to the scalar reference") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = random_coeffs(rng, rng.between(0, 7));
    const std::size_t n = static_cast<std::size_t>(rng.between(0, 41));
    const auto xs = random_points(rng, n);
    const auto ms = random_points(rng, n);
    std::vector<double> a(n), b(n);
    k::poly_eval(c, xs, a);
    k::scalar::poly_eval(c, xs, b);
    CHECK(bit_equal(a, b));
    k::tangent_gap(c, xs, ms, a);
    k::scalar::tangent_gap(c, xs, ms, b);
    CHECK(bit_equal(a, b));
  }
}

#if defined(MPERSUADE_HAVE_AVX2)
TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
  if (!k::isa_available(k::Isa::avx2)) {
    MESSAGE("CPU without AVX2; skipped");
    return;
  }
  gen::Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const auto c = random_coeffs(rng, rng.between(0, 7));
    // Lengths around the vector width exercise the remainder loop.
    const std::size_t n = static_cast<std::size_t>(rng.between(0, 67));
    const auto xs = random_points(rng, n);
    const auto ms = random_points(rng, n);
    std::vector<double> a(n), b(n);
    k::avx2::poly_eval(c, xs, a);
    k::scalar::poly_eval(c, xs, b);
    CHECK(bit_equal(a, b));
    k::avx2::tangent_gap(c, xs, ms, a);
    k::scalar::tangent_gap(c, xs, ms, b);
    CHECK(bit_equal(a, b));
  }
}
#endif

TEST_CASE("poly_eval agrees with the power-sum definition") {
  gen::Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_coeffs(rng, rng.between(0, 6));
    const auto xs = random_points(rng, 25);
    std::vector<double> out(xs.size());
    k::poly_eval(c, xs, out);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == doctest::Approx(ref::poly(c, xs[i])).epsilon(1e-12));
  }
}

TEST_CASE("tangent_gap kernel matches the definition and ignores the affine part") {
  gen::Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_coeffs(rng, rng.between(2, 6));
    const auto xs = random_points(rng, 19);
    const auto ms = random_points(rng, 19);
    std::vector<double> gap(xs.size()), shifted(xs.size());
    k::tangent_gap(c, xs, ms, gap);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(gap[i] == doctest::Approx(ref::tangent_gap(c, xs[i], ms[i])).scale(1.0).epsilon(1e-10));
    c[0] += rng.uniform(-5.0, 5.0);
    c[1] += rng.uniform(-5.0, 5.0);
    k::tangent_gap(c, xs, ms, shifted);
    CHECK(bit_equal(gap, shifted));
  }
}

TEST_CASE("tangent_gap vanishes on the diagonal and is (w-m)^2 for m^2") {
  const std::vector<double> sq{0.0, 0.0, 1.0};
  const std::vector<double> xs{0.0, 0.1, 0.37, 0.9, 1.0};
  const std::vector<double> ms{0.0, 0.8, 0.2, 0.9, 0.5};
  std::vector<double> out(xs.size());
  k::tangent_gap(sq, xs, ms, out);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == doctest::Approx((xs[i] - ms[i]) * (xs[i] - ms[i])));
  k::tangent_gap(sq, xs, xs, out);
  for (double g : out) CHECK(g == 0.0);
}

TEST_CASE("ObjectiveFn batch entry points match the pointwise ones bitwise") {
  const auto v = mpersuade::ObjectiveFn::m_family(0.3, 0.7).with_affine(13.0 / 600.0, 0.0);
  std::vector<double> xs(101);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i) / 100.0;
  std::vector<double> out(xs.size());
  v.eval_many(xs, out);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == v.eval(xs[i]));
  std::vector<double> ms(xs.rbegin(), xs.rend());
  v.tangent_gap_many(xs, ms, out);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(out[i] == v.tangent_gap(xs[i], ms[i]));
}
