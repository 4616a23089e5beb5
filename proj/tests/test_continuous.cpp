#include <doctest.h>

#include <cmath>

#include "mpersuade/continuous_solver.hpp"
#include "mpersuade/errors.hpp"
#include "mpersuade/oracle.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace mpersuade;

namespace {

const ObjectiveFn quartic = ObjectiveFn::m_family(0.3, 0.7).with_affine(13.0 / 600.0, 0.0);
const ref::Coeffs quartic_c = ref::plus_affine(ref::m_family(0.3, 0.7), 13.0 / 600.0, 0.0);

const std::vector<std::vector<double>> polarized_pieces{{0.0, 0.1, 0.45}, {0.1, 0.9, 0.10}, {0.9, 1.0, 0.45}};

ContinuousPrior polarized() {
  return ContinuousPrior::piecewise_uniform({{0.0, 0.1, 0.45}, {0.1, 0.9, 0.10}, {0.9, 1.0, 0.45}});
}

// Golden-section maximum of f on [lo, hi] after a coarse scan.
double maximize(const std::function<double(double)>& f, double lo, double hi, double* at = nullptr) {
  const double x = ref::golden_argmax(f, lo, hi, 2000);
  if (at != nullptr) *at = x;
  return f(x);
}

}  // namespace

TEST_CASE("pooling_value examples") {
  const ContinuousPrior u = ContinuousPrior::uniform();
  CHECK(pooling_value(u, quartic, PoolingSet::no_disclosure()) == doctest::Approx(quartic.eval(0.5)).epsilon(1e-14));
  CHECK(pooling_value(u, quartic, PoolingSet::full_disclosure()) ==
        doctest::Approx(ref::integrate(ref::piecewise_uniform({{0.0, 1.0, 1.0}}), quartic_c, 0.0, 1.0)).epsilon(1e-12));
  const double split = pooling_value(u, quartic, PoolingSet::create({{0.0, 0.5}, {0.5, 1.0}}));
  CHECK(split == doctest::Approx(0.5 * quartic.eval(0.25) + 0.5 * quartic.eval(0.75)).epsilon(1e-14));
  CHECK(split == doctest::Approx(0.00113281).epsilon(1e-5));
}

TEST_CASE("first-order residuals match quadrature-based evaluations") {
  gen::Rng rng(51);
  for (int i = 0; i < 40; ++i) {
    const auto prior = gen::piecewise_uniform(rng);
    const auto v = gen::m_shaped(rng);
    const double w = rng.uniform(0.02, 0.98);
    const double ml = ref::conditional_mean(prior.density, 0.0, w);
    const double mr = ref::conditional_mean(prior.density, w, 1.0);
    const auto tangent = [&](double m) { return ref::poly(v.coeffs, m) + ref::poly_d1(v.coeffs, m) * (w - m); };
    const double scale = 1.0 + std::abs(v.coeffs[1]);
    CHECK(std::abs(left_tangency_residual(prior.prior, v.fn, w) - (tangent(ml) - ref::poly(v.coeffs, w))) < 1e-11 * scale);
    CHECK(std::abs(right_tangency_residual(prior.prior, v.fn, w) - (tangent(mr) - ref::poly(v.coeffs, w))) < 1e-11 * scale);
    CHECK(std::abs(cutoff_residual(prior.prior, v.fn, w) - (tangent(ml) - tangent(mr))) < 1e-11 * scale);
    CHECK(cutoff_rule_value(prior.prior, v.fn, w) ==
          doctest::Approx(ref::cutoff_value(prior.density, v.coeffs, w)).epsilon(1e-10).scale(scale));
    const double a = rng.uniform(0.0, w);
    CHECK(interval_disclosure_value(prior.prior, v.fn, a, w) ==
          doctest::Approx(ref::interval_value(prior.density, v.coeffs, a, w)).epsilon(1e-10).scale(scale));
  }
}

TEST_CASE("uniform prior, even quartic: interval disclosure") {
  const ContinuousPrior u = ContinuousPrior::uniform();
  const IntervalDisclosure sol = solve_monotone_continuous(u, quartic);
  CHECK(sol.branch == Branch::interval);
  CHECK(sol.omega_l == doctest::Approx(0.4612956575).epsilon(1e-9));
  CHECK(sol.omega_r == doctest::Approx(1.0 - sol.omega_l).epsilon(1e-10));
  CHECK(sol.m_l == doctest::Approx(sol.omega_l / 2.0).epsilon(1e-12));
  CHECK(sol.m_r == doctest::Approx((1.0 + sol.omega_r) / 2.0).epsilon(1e-12));
  CHECK(std::abs(left_tangency_residual(u, quartic, sol.omega_l)) < 1e-8);
  CHECK(std::abs(right_tangency_residual(u, quartic, sol.omega_r)) < 1e-8);
  CHECK(sol.m_l > 0.0);
  CHECK(sol.m_l < 0.3);
  CHECK(sol.m_r > 0.7);
  CHECK(sol.m_r < 1.0);

  // Independent: maximize the symmetric pair value by quadrature.
  const ref::Density d = ref::piecewise_uniform({{0.0, 1.0, 1.0}});
  double at = 0.0;
  const double best = maximize([&](double a) { return ref::interval_value(d, quartic_c, a, 1.0 - a); }, 0.3, 0.5, &at);
  CHECK(sol.value == doctest::Approx(best).epsilon(1e-9));
  CHECK(sol.value == doctest::Approx(0.0011431160).epsilon(1e-8));
  CHECK(at == doctest::Approx(sol.omega_l).epsilon(1e-6));

  const GridResult grid = grid_search_continuous(Prior(u), quartic, 400, GridFamily::interval_disclosure);
  CHECK(std::abs(grid.value - sol.value) < 1e-5);
  CHECK(grid.value <= sol.value + 1e-9);
  CHECK(verify_contraction(induce_distribution(u, pooling_set(sol)), Prior(u)).pass);
}

TEST_CASE("polarized prior, even quartic: cutoff rule") {
  const ContinuousPrior p = polarized();
  const ShapeReport shape = classify_shape(quartic);
  CHECK_FALSE(solve_interval_disclosure(p, quartic, shape).has_value());

  const auto roots = cutoff_rule_roots(p, quartic);
  REQUIRE(roots.size() == 5);
  CHECK(roots[2].omega == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(roots[2].value == doctest::Approx(0.00110206).epsilon(1e-5));
  CHECK(p.conditional_mean(0.0, 0.5) == doctest::Approx(0.075).epsilon(1e-12));
  CHECK(roots[2].value == doctest::Approx(quartic.eval(0.075)).epsilon(1e-12));
  CHECK(roots[1].omega == doctest::Approx(0.0965043129).epsilon(1e-8));
  CHECK(roots[3].omega == doctest::Approx(1.0 - roots[1].omega).epsilon(1e-9));
  for (const CutoffRoot& r : roots) CHECK(std::abs(r.residual) < 1e-8);

  const IntervalDisclosure sol = solve_monotone_continuous(p, quartic);
  CHECK(sol.branch == Branch::cutoff);
  CHECK(sol.omega_l == sol.omega_r);
  CHECK(sol.omega_l == doctest::Approx(0.0965043129).epsilon(1e-8));
  CHECK(sol.value == doctest::Approx(0.0011525170).epsilon(1e-8));
  CHECK(sol.value > quartic.eval(0.5));
  CHECK(std::abs(cutoff_residual(p, quartic, sol.omega_l)) < 1e-8);

  // Independent: the best cutoff value over [0,1] by quadrature.
  const ref::Density d = ref::piecewise_uniform(polarized_pieces);
  double at = 0.0;
  const double best = maximize([&](double w) { return ref::cutoff_value(d, quartic_c, w); }, 0.001, 0.5, &at);
  CHECK(sol.value == doctest::Approx(best).epsilon(1e-9));
  CHECK(at == doctest::Approx(sol.omega_l).epsilon(1e-5));

  const GridResult grid = grid_search_continuous(Prior(p), quartic, 400, GridFamily::interval_disclosure);
  CHECK(grid.value <= sol.value + 1e-9);
  CHECK(grid.value == doctest::Approx(0.0011512907).epsilon(1e-8));
}

TEST_CASE("polarized prior: bipooling certificate and constructions") {
  const ContinuousPrior p = polarized();
  const ShapeReport shape = classify_shape(quartic);
  const BipoolingCertificate cert = check_bipooling_condition(p, quartic, shape);
  REQUIRE(cert.holds);
  CHECK(cert.reason.empty());
  CHECK(cert.m_l == doctest::Approx((1.0 - std::sqrt(0.48)) / 2.0).epsilon(1e-10));
  CHECK(cert.m_r == doctest::Approx((1.0 + std::sqrt(0.48)) / 2.0).epsilon(1e-10));
  CHECK(cert.omega_ss == doctest::Approx(0.9038).epsilon(1e-3));
  CHECK(p.conditional_mean(0.0, cert.omega_ss) == doctest::Approx(cert.m_l).epsilon(1e-10));
  CHECK(cert.excess == doctest::Approx(0.105).epsilon(1e-3));
  CHECK(cert.excess > 0.0);

  const double co = concavify_at(quartic, *cert.bitangent, p.mean());
  CHECK(co == doctest::Approx(0.00140832).epsilon(1e-5));

  for (BipoolingMode mode : {BipoolingMode::deterministic_nonmonotone, BipoolingMode::stochastic_monotone}) {
    const BipoolingSignal s = construct_bipooling(p, quartic, cert, mode);
    REQUIRE(s.atoms.size() == 2);
    CHECK(s.atoms[0].mean == doctest::Approx(cert.m_l).epsilon(1e-8));
    CHECK(s.atoms[1].mean == doctest::Approx(cert.m_r).epsilon(1e-8));
    CHECK(s.atoms[0].mass == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(s.atoms[1].mass == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(s.value == doctest::Approx(co).epsilon(1e-8));
    const auto g = induce_distribution(s);
    CHECK(g.mean() == doctest::Approx(p.mean()).epsilon(1e-10));
    CHECK(verify_contraction(g, Prior(p)).pass);
  }
  const BipoolingSignal det = construct_bipooling(p, quartic, cert, BipoolingMode::deterministic_nonmonotone);
  CHECK(det.omega_l == doctest::Approx(0.0123).epsilon(1e-3));
  CHECK(det.omega_r == doctest::Approx(0.9011).epsilon(1e-3));
  CHECK(p.conditional_mean(det.omega_l, det.omega_r) == doctest::Approx(cert.m_l).epsilon(1e-8));
  CHECK(nonmonotonicity_witness(det));
  const BipoolingSignal sto = construct_bipooling(p, quartic, cert, BipoolingMode::stochastic_monotone);
  CHECK(sto.omega_ss == doctest::Approx(0.9038).epsilon(1e-3));
  CHECK(sto.q == doctest::Approx(0.880).epsilon(1e-2));
  CHECK(fosd_witness(sto));

  const UnrestrictedValue u = unrestricted_value(p, quartic);
  CHECK(u.bipooling);
  CHECK(u.value == doctest::Approx(co).epsilon(1e-12));
  CHECK(u.value > solve_monotone_continuous(p, quartic).value + 1e-9);

  const GridResult grid = grid_search_continuous(Prior(p), quartic, 400, GridFamily::bipooling_pairs);
  CHECK(std::abs(grid.value - co) < 1e-5);
  CHECK(grid.value <= co + 1e-9);
}

TEST_CASE("uniform prior: bipooling condition fails") {
  const ContinuousPrior u = ContinuousPrior::uniform();
  const BipoolingCertificate cert = check_bipooling_condition(u, quartic, classify_shape(quartic));
  CHECK_FALSE(cert.holds);
  CHECK_FALSE(cert.reason.empty());
  CHECK(cert.omega_ss == doctest::Approx(1.0 - std::sqrt(0.48)).epsilon(1e-9));
  CHECK(cert.excess == doctest::Approx((1.0 + cert.omega_ss) / 2.0 - cert.m_r).epsilon(1e-10));
  CHECK(cert.excess < 0.0);
  CHECK_THROWS_AS(construct_bipooling(u, quartic, cert, BipoolingMode::stochastic_monotone), CertificateRequired);
  const UnrestrictedValue v = unrestricted_value(u, quartic);
  CHECK_FALSE(v.bipooling);
  CHECK(v.value == solve_monotone_continuous(u, quartic).value);
}

TEST_CASE("shape errors and missing bitangents") {
  const ContinuousPrior u = ContinuousPrior::uniform();
  const ObjectiveFn s = ObjectiveFn::polynomial({0.0, 0.0, 3.0, -2.0});
  CHECK_THROWS_AS(solve_monotone_continuous(u, s), ShapeError);
  CHECK_THROWS_AS(unrestricted_value(u, s), ShapeError);
  const BipoolingCertificate cert = check_bipooling_condition(u, s, classify_shape(s));
  CHECK_FALSE(cert.holds);
  CHECK_FALSE(cert.bitangent.has_value());
}

TEST_CASE("ultra-polarized prior: a cutoff still beats no disclosure") {
  const ContinuousPrior p =
      ContinuousPrior::piecewise_uniform({{0.0, 0.01, 0.495}, {0.01, 0.99, 0.01}, {0.99, 1.0, 0.495}});
  const IntervalDisclosure sol = solve_monotone_continuous(p, quartic);
  const GridResult grid = grid_search_continuous(Prior(p), quartic, 400, GridFamily::interval_disclosure);
  CHECK(sol.branch == Branch::cutoff);
  CHECK(sol.value > quartic.eval(0.5) + 1e-4);
  CHECK(grid.value > quartic.eval(0.5) + 1e-4);
  CHECK(grid.value <= sol.value + 1e-9);
}

TEST_CASE("no-disclosure branch") {
  // Convex region (0.1, 0.3) is small and far below the mean.
  const ContinuousPrior u = ContinuousPrior::uniform();
  const ObjectiveFn v = ObjectiveFn::m_family(0.1, 0.3);
  const IntervalDisclosure sol = solve_monotone_continuous(u, v);
  CHECK(sol.branch == Branch::none);
  CHECK(sol.omega_l == 0.0);
  CHECK(sol.omega_r == 1.0);
  CHECK(sol.m_l == doctest::Approx(0.5));
  CHECK(sol.m_r == doctest::Approx(0.5));
  CHECK(sol.value == doctest::Approx(v.eval(0.5)).epsilon(1e-14));
  const GridResult grid = grid_search_continuous(Prior(u), v, 400, GridFamily::interval_disclosure);
  CHECK(grid.value <= sol.value + 1e-12);
  // Quadrature scan of every cutoff: none beats pooling everything.
  const ref::Density d = ref::piecewise_uniform({{0.0, 1.0, 1.0}});
  const ref::Coeffs c = ref::m_family(0.1, 0.3);
  for (int k = 1; k < 400; ++k) CHECK(ref::cutoff_value(d, c, k / 400.0) <= ref::poly(c, 0.5) + 1e-12);
}

TEST_CASE("property: solver optimality, residuals and diagnostics on random instances") {
  gen::Rng rng(52);
  int branches[3] = {0, 0, 0};
  for (int i = 0; i < 100; ++i) {
    const auto prior = gen::piecewise_uniform(rng);
    const auto v = gen::m_shaped(rng);
    const ShapeReport shape = classify_shape(v.fn);
    const IntervalDisclosure sol = solve_monotone_continuous(prior.prior, v.fn);
    ++branches[static_cast<int>(sol.branch)];
    CHECK(0.0 <= sol.omega_l);
    CHECK(sol.omega_l <= sol.omega_r);
    CHECK(sol.omega_r <= 1.0);
    if (sol.branch == Branch::interval) {
      CHECK(std::abs(left_tangency_residual(prior.prior, v.fn, sol.omega_l)) < 1e-8);
      CHECK(std::abs(right_tangency_residual(prior.prior, v.fn, sol.omega_r)) < 1e-8);
      CHECK(sol.m_l > 0.0);
      CHECK(sol.m_l < shape.inflections[0]);
      CHECK(sol.m_r > shape.inflections[1]);
      CHECK(sol.m_r < 1.0);
    }
    if (sol.branch == Branch::cutoff) CHECK(std::abs(cutoff_residual(prior.prior, v.fn, sol.omega_l)) < 1e-8);
    if (sol.branch != Branch::none) {
      CHECK(sol.m_l == doctest::Approx(prior.prior.conditional_mean(0.0, sol.omega_l)).epsilon(1e-10));
      CHECK(sol.m_r == doctest::Approx(prior.prior.conditional_mean(sol.omega_r, 1.0)).epsilon(1e-10));
    }
    const double none = v.fn.eval(prior.prior.mean());
    CHECK(sol.value >= none - 1e-12);
    const GridResult grid = grid_search_continuous(Prior(prior.prior), v.fn, 400, GridFamily::interval_disclosure);
    CHECK(sol.value >= grid.value - 1e-6);
    CHECK(verify_contraction(induce_distribution(prior.prior, pooling_set(sol)), Prior(prior.prior)).pass);

    const BipoolingCertificate cert = check_bipooling_condition(prior.prior, v.fn, shape);
    if (cert.holds) {
      const double co = concavify_at(v.fn, *cert.bitangent, prior.prior.mean());
      CHECK(sol.value < co - 1e-9);
      for (BipoolingMode mode : {BipoolingMode::deterministic_nonmonotone, BipoolingMode::stochastic_monotone}) {
        const BipoolingSignal s = construct_bipooling(prior.prior, v.fn, cert, mode);
        CHECK(s.value == doctest::Approx(co).epsilon(1e-8).scale(1.0));
        CHECK(verify_contraction(induce_distribution(s), Prior(prior.prior)).pass);
      }
    }
  }
  MESSAGE("branches interval/cutoff/none: " << branches[0] << "/" << branches[1] << "/" << branches[2]);
  CHECK(branches[0] > 0);
  CHECK(branches[1] > 0);
  CHECK(branches[2] > 0);
}

TEST_CASE("property: optimal cutoffs are invariant to affine addends") {
  gen::Rng rng(53);
  for (int i = 0; i < 60; ++i) {
    const auto prior = gen::piecewise_uniform(rng);
    const auto base = gen::m_shaped(rng, false);
    const double a = rng.uniform(-5.0, 5.0);
    const double b = rng.uniform(-5.0, 5.0);
    const IntervalDisclosure s0 = solve_monotone_continuous(prior.prior, base.fn);
    const IntervalDisclosure s1 = solve_monotone_continuous(prior.prior, base.fn.with_affine(a, b));
    CHECK(s0.branch == s1.branch);
    CHECK(std::abs(s0.omega_l - s1.omega_l) < 1e-9);
    CHECK(std::abs(s0.omega_r - s1.omega_r) < 1e-9);
    CHECK(std::abs(s1.value - s0.value - (a * prior.prior.mean() + b)) < 1e-9);
  }
}
