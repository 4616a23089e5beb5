#include "mpersuade/continuous_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mpersuade/errors.hpp"
#include "mpersuade/root_finding.hpp"

namespace mpersuade {

namespace {

ShapeReport require_m_shape(const ObjectiveFn& v, const SolverOptions& opts) {
  ShapeReport shape = classify_shape(v, opts.shape_grid, opts.shape_tol);
  if (shape.kind != ShapeKind::m_shaped)
    throw ShapeError("continuous_solver.shape_error",
                     "continuous solver needs an m-shaped objective, got " + std::string(to_string(shape.kind)));
  return shape;
}

void check_shape_argument(const ShapeReport& shape) {
  if (shape.kind != ShapeKind::m_shaped || shape.inflections.size() != 2)
    throw ShapeError("continuous_solver.shape_error", "continuous solver needs an m-shaped objective");
}

double lower_mean(const ContinuousPrior& prior, double omega) { return prior.conditional_mean(0.0, omega); }
double upper_mean(const ContinuousPrior& prior, double omega) { return prior.conditional_mean(omega, 1.0); }

// Interior scan points of (lo, hi): lo + (hi - lo) k / (n + 1), k = 1..n.
std::vector<double> scan_grid(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) xs[static_cast<std::size_t>(k - 1)] = lo + (hi - lo) * k / (n + 1);
  return xs;
}

// Residual -Delta(x, m(x)) on a grid, evaluated with the batch kernel.
std::vector<double> tangency_residuals(const ObjectiveFn& v, const std::vector<double>& xs,
                                       const std::vector<double>& ms) {
  std::vector<double> out(xs.size());
  v.tangent_gap_many(xs, ms, out);
  for (double& r : out) r = -r;
  return out;
}

std::vector<double> refine_roots(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const std::function<double(double)>& f, const SolverOptions& opts) {
  std::vector<double> roots;
  for (const Bracket& b : sign_change_brackets(xs, ys))
    roots.push_back(b.lo == b.hi ? b.lo : bisect(f, b.lo, b.hi, {opts.root_width, opts.max_bisect}));
  return roots;
}

constexpr double kFocTol = 1e-8;
constexpr double kDegenerateWidth = 1e-10;

}  // namespace

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::interval: return "interval";
    case Branch::cutoff: return "cutoff";
    case Branch::none: return "none";
  }
  return "none";
}

std::string_view to_string(BipoolingMode mode) {
  return mode == BipoolingMode::deterministic_nonmonotone ? "deterministic_nonmonotone" : "stochastic_monotone";
}

PoolingSet pooling_set(const IntervalDisclosure& sol) {
  if (sol.branch == Branch::none) return PoolingSet::no_disclosure();
  std::vector<Interval> intervals;
  if (sol.omega_l > 0.0) intervals.push_back({0.0, sol.omega_l});
  if (sol.omega_r < 1.0) intervals.push_back({sol.omega_r, 1.0});
  return PoolingSet::create(std::move(intervals));
}

double pooling_value(const ContinuousPrior& prior, const ObjectiveFn& v, const PoolingSet& p) {
  return induce_distribution(prior, p).value(v);
}

double left_tangency_residual(const ContinuousPrior& prior, const ObjectiveFn& v, double omega) {
  return -v.tangent_gap(omega, lower_mean(prior, omega));
}

double right_tangency_residual(const ContinuousPrior& prior, const ObjectiveFn& v, double omega) {
  return -v.tangent_gap(omega, upper_mean(prior, omega));
}

double cutoff_residual(const ContinuousPrior& prior, const ObjectiveFn& v, double omega) {
  return v.tangent_gap(omega, upper_mean(prior, omega)) - v.tangent_gap(omega, lower_mean(prior, omega));
}

double cutoff_rule_value(const ContinuousPrior& prior, const ObjectiveFn& v, double omega) {
  const double f = prior.cdf(omega);
  return v.eval(lower_mean(prior, omega)) * f + v.eval(upper_mean(prior, omega)) * (1.0 - f);
}

double interval_disclosure_value(const ContinuousPrior& prior, const ObjectiveFn& v, double a, double b) {
  if (!(0.0 <= a && a <= b && b <= 1.0)) throw InvalidArgument("continuous_solver.invalid", "need 0 <= a <= b <= 1");
  double total = prior.integrate(v, a, b);
  const double low = prior.mass(0.0, a);
  if (low > 0.0) total += low * v.eval(lower_mean(prior, a));
  const double high = prior.mass(b, 1.0);
  if (high > 0.0) total += high * v.eval(upper_mean(prior, b));
  return total;
}

std::vector<IntervalDisclosure> interval_disclosure_candidates(const ContinuousPrior& prior, const ObjectiveFn& v,
                                                               const ShapeReport& shape, const SolverOptions& opts) {
  check_shape_argument(shape);
  const std::vector<double> xs = scan_grid(shape.inflections[0], shape.inflections[1], opts.scan_points);
  std::vector<double> lows(xs.size());
  std::vector<double> highs(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    lows[k] = lower_mean(prior, xs[k]);
    highs[k] = upper_mean(prior, xs[k]);
  }
  const auto left = refine_roots(xs, tangency_residuals(v, xs, lows),
                                 [&](double x) { return left_tangency_residual(prior, v, x); }, opts);
  const auto right = refine_roots(xs, tangency_residuals(v, xs, highs),
                                  [&](double x) { return right_tangency_residual(prior, v, x); }, opts);

  std::vector<IntervalDisclosure> out;
  for (double a : left) {
    if (!(std::abs(left_tangency_residual(prior, v, a)) < kFocTol)) continue;
    for (double b : right) {
      if (!(b - a > kDegenerateWidth) || !(std::abs(right_tangency_residual(prior, v, b)) < kFocTol)) continue;
      IntervalDisclosure sol;
      sol.branch = Branch::interval;
      sol.omega_l = a;
      sol.omega_r = b;
      sol.m_l = lower_mean(prior, a);
      sol.m_r = upper_mean(prior, b);
      sol.value = interval_disclosure_value(prior, v, a, b);
      out.push_back(sol);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const IntervalDisclosure& x, const IntervalDisclosure& y) { return x.value > y.value; });
  return out;
}

std::optional<IntervalDisclosure> solve_interval_disclosure(const ContinuousPrior& prior, const ObjectiveFn& v,
                                                            const ShapeReport& shape, const SolverOptions& opts) {
  auto candidates = interval_disclosure_candidates(prior, v, shape, opts);
  if (candidates.empty()) return std::nullopt;
  return candidates.front();
}

std::vector<CutoffRoot> cutoff_rule_roots(const ContinuousPrior& prior, const ObjectiveFn& v,
                                          const SolverOptions& opts) {
  const std::vector<double> xs = scan_grid(0.0, 1.0, opts.scan_points);
  std::vector<double> lows(xs.size());
  std::vector<double> highs(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    lows[k] = lower_mean(prior, xs[k]);
    highs[k] = upper_mean(prior, xs[k]);
  }
  std::vector<double> gap_low(xs.size());
  std::vector<double> gap_high(xs.size());
  v.tangent_gap_many(xs, lows, gap_low);
  v.tangent_gap_many(xs, highs, gap_high);
  std::vector<double> residuals(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) residuals[k] = gap_high[k] - gap_low[k];

  std::vector<CutoffRoot> roots;
  for (double x : refine_roots(xs, residuals, [&](double w) { return cutoff_residual(prior, v, w); }, opts))
    roots.push_back({x, cutoff_rule_value(prior, v, x), cutoff_residual(prior, v, x)});
  return roots;
}

std::optional<IntervalDisclosure> solve_cutoff_rule(const ContinuousPrior& prior, const ObjectiveFn& v,
                                                    const ShapeReport& shape, const SolverOptions& opts) {
  check_shape_argument(shape);
  const auto roots = cutoff_rule_roots(prior, v, opts);
  const CutoffRoot* best = nullptr;
  for (const CutoffRoot& r : roots) {
    if (!(std::abs(r.residual) < kFocTol)) continue;
    if (!best || r.value > best->value + opts.tie_tol) best = &r;
  }
  if (!best || !(best->value > v.eval(prior.mean()) + opts.tie_tol)) return std::nullopt;
  IntervalDisclosure sol;
  sol.branch = Branch::cutoff;
  sol.omega_l = sol.omega_r = best->omega;
  sol.m_l = lower_mean(prior, best->omega);
  sol.m_r = upper_mean(prior, best->omega);
  sol.value = best->value;
  return sol;
}

IntervalDisclosure solve_monotone_continuous(const ContinuousPrior& prior, const ObjectiveFn& v,
                                             const SolverOptions& opts) {
  const ShapeReport shape = require_m_shape(v, opts);
  if (auto sol = solve_interval_disclosure(prior, v, shape, opts)) return *sol;
  if (auto sol = solve_cutoff_rule(prior, v, shape, opts)) return *sol;
  IntervalDisclosure none;
  none.branch = Branch::none;
  none.omega_l = 0.0;
  none.omega_r = 1.0;
  none.m_l = none.m_r = prior.mean();
  none.value = v.eval(prior.mean());
  return none;
}

BipoolingCertificate check_bipooling_condition(const ContinuousPrior& prior, const ObjectiveFn& v,
                                               const ShapeReport& shape) {
  BipoolingCertificate cert;
  try {
    cert.bitangent = solve_bitangent(v, shape);
  } catch (const NoBitangent& e) {
    cert.reason = e.what();
    return cert;
  }
  cert.m_l = cert.bitangent->m_l;
  cert.m_r = cert.bitangent->m_r;
  const double mean = prior.mean();
  if (!(0.0 < cert.m_l && cert.m_l < mean && mean < cert.m_r && cert.m_r < 1.0)) {
    cert.reason = "prior mean is not strictly between the bitangent points";
    return cert;
  }
  cert.omega_ss = bisect(
      [&](double x) { return (x > 0.0 ? lower_mean(prior, x) : 0.0) - cert.m_l; }, 0.0, 1.0, {1e-14, 200});
  cert.excess = upper_mean(prior, cert.omega_ss) - cert.m_r;
  if (!(cert.omega_ss > cert.m_l && cert.omega_ss < 1.0)) {
    cert.reason = "cutoff pinning the lower mean at m_L is out of range";
    return cert;
  }
  if (!(cert.excess > 0.0)) {
    cert.reason = "upper conditional mean does not exceed m_R";
    return cert;
  }
  cert.holds = true;
  return cert;
}

BipoolingSignal construct_bipooling(const ContinuousPrior& prior, const ObjectiveFn& v,
                                    const BipoolingCertificate& cert, BipoolingMode mode) {
  if (!cert.holds) throw CertificateRequired("bipooling needs a certificate that holds: " + cert.reason);
  const double mean = prior.mean();
  const double low_mass = (cert.m_r - mean) / (cert.m_r - cert.m_l);
  BipoolingSignal sig;
  sig.mode = mode;

  if (mode == BipoolingMode::deterministic_nonmonotone) {
    // Slide a window of mass low_mass until its mean reaches m_L.
    auto right_end = [&](double a) { return prior.quantile(std::min(1.0, prior.cdf(a) + low_mass)); };
    const double a_max = prior.quantile(1.0 - low_mass);
    sig.omega_l = bisect([&](double a) { return prior.conditional_mean(a, right_end(a)) - cert.m_l; }, 0.0, a_max,
                         {1e-14, 200});
    sig.omega_r = right_end(sig.omega_l);
    const double mid_mass = prior.mass(sig.omega_l, sig.omega_r);
    const double outer_mass = prior.mass(0.0, sig.omega_l) + prior.mass(sig.omega_r, 1.0);
    const double outer_moment = prior.moment(1, 0.0, sig.omega_l) + prior.moment(1, sig.omega_r, 1.0);
    sig.atoms = {{prior.conditional_mean(sig.omega_l, sig.omega_r), mid_mass}, {outer_moment / outer_mass, outer_mass}};
  } else {
    sig.omega_ss = cert.omega_ss;
    const double f = prior.cdf(cert.omega_ss);
    const double m = prior.moment(1, 0.0, cert.omega_ss);
    auto high_mean = [&](double q) { return ((1.0 - q) * m + (mean - m)) / ((1.0 - q) * f + 1.0 - f); };
    sig.q = bisect([&](double q) { return high_mean(q) - cert.m_r; }, 0.0, 1.0, {1e-14, 200});
    sig.atoms = {{lower_mean(prior, cert.omega_ss), sig.q * f}, {high_mean(sig.q), (1.0 - sig.q) * f + 1.0 - f}};
  }
  for (const Atom& a : sig.atoms) sig.value += a.mass * v.eval(a.mean);
  return sig;
}

PosteriorDistribution induce_distribution(const BipoolingSignal& signal) {
  return PosteriorDistribution::from_atoms(signal.atoms);
}

bool nonmonotonicity_witness(const BipoolingSignal& signal) {
  if (signal.mode != BipoolingMode::deterministic_nonmonotone || signal.atoms.size() != 2) return false;
  return signal.atoms[0].mean < signal.atoms[1].mean && 0.0 < signal.omega_l && signal.omega_l < signal.omega_r &&
         signal.omega_r < 1.0;
}

bool fosd_witness(const BipoolingSignal& signal) {
  if (signal.mode != BipoolingMode::stochastic_monotone || signal.atoms.size() != 2) return false;
  const double lo = signal.atoms[0].mean;
  const double hi = signal.atoms[1].mean;
  if (!(lo < hi) || !(signal.q >= 0.0 && signal.q <= 1.0)) return false;
  // Realization CDFs: above omega_ss a point mass at hi; below, q at lo and
  // 1 - q at hi.
  for (double x : {lo, 0.5 * (lo + hi), hi}) {
    const double above = x >= hi ? 1.0 : 0.0;
    const double below = (x >= lo ? signal.q : 0.0) + (x >= hi ? 1.0 - signal.q : 0.0);
    if (above > below) return false;
  }
  return true;
}

UnrestrictedValue unrestricted_value(const ContinuousPrior& prior, const ObjectiveFn& v, const SolverOptions& opts) {
  const ShapeReport shape = require_m_shape(v, opts);
  const BipoolingCertificate cert = check_bipooling_condition(prior, v, shape);
  if (cert.holds)
    return {concavify_at(v, *cert.bitangent, prior.mean()), true, "bipooling on the bitangent points"};
  const IntervalDisclosure sol = solve_monotone_continuous(prior, v, opts);
  return {sol.value, false, "monotone optimum (" + std::string(to_string(sol.branch)) + ")"};
}

}  // namespace mpersuade
