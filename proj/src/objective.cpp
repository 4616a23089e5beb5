#include "mpersuade/objective.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "mpersuade/errors.hpp"
#include "mpersuade/kernels.hpp"
#include "mpersuade/root_finding.hpp"

namespace mpersuade {

namespace {

std::vector<double> differentiate(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

double horner(const std::vector<double>& c, double x) {
  double acc = c.back();
  for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * x + c[k];
  return acc;
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::vector<double> uniform_grid(int points) {
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
  return xs;
}

}  // namespace

ObjectiveFn::ObjectiveFn(std::vector<double> coeffs, std::string description)
    : coeffs_(std::move(coeffs)), description_(std::move(description)) {
  d1_ = differentiate(coeffs_);
  d2_ = differentiate(d1_);
  d1_shape_ = d1_;
  d1_shape_[0] = 0.0;
}

ObjectiveFn ObjectiveFn::polynomial(std::vector<double> coeffs, std::string description) {
  if (coeffs.empty()) throw InvalidArgument("objective.invalid", "polynomial needs at least one coefficient");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw InvalidArgument("objective.invalid", "polynomial coefficients must be finite");
  if (description.empty()) {
    description = "polynomial[";
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      description += (k ? "," : "") + format_number(coeffs[k]);
    description += "]";
  }
  return ObjectiveFn(std::move(coeffs), std::move(description));
}

ObjectiveFn ObjectiveFn::s_family(double omega_m) {
  if (!(omega_m > 0.0 && omega_m < 1.0))
    throw InvalidArgument("objective.invalid", "s_family requires 0 < omega_M < 1");
  return ObjectiveFn({0.0, 0.0, omega_m / 2.0, -1.0 / 6.0},
                     "s_family(omega_M=" + format_number(omega_m) + ")");
}

ObjectiveFn ObjectiveFn::m_family(double omega_l, double omega_r) {
  if (!(omega_l > 0.0 && omega_l < omega_r && omega_r < 1.0))
    throw InvalidArgument("objective.invalid", "m_family requires 0 < omega_L < omega_R < 1");
  return ObjectiveFn({0.0, 0.0, -omega_l * omega_r / 2.0, (omega_l + omega_r) / 6.0, -1.0 / 12.0},
                     "m_family(omega_L=" + format_number(omega_l) +
                         ",omega_R=" + format_number(omega_r) + ")");
}

ObjectiveFn ObjectiveFn::with_affine(double a, double b) const {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw InvalidArgument("objective.invalid", "affine addend must be finite");
  std::vector<double> c = coeffs_;
  if (c.size() < 2) c.resize(2, 0.0);
  c[0] += b;
  c[1] += a;
  return ObjectiveFn(std::move(c),
                     description_ + "+affine(" + format_number(a) + "," + format_number(b) + ")");
}

ObjectiveFn ObjectiveFn::scaled(double scale) const {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw InvalidArgument("objective.invalid", "scale must be positive and finite");
  std::vector<double> c = coeffs_;
  for (double& x : c) x *= scale;
  return ObjectiveFn(std::move(c), format_number(scale) + "*" + description_);
}

double ObjectiveFn::eval(double m) const { return horner(coeffs_, m); }
double ObjectiveFn::deriv1(double m) const { return horner(d1_, m); }
double ObjectiveFn::deriv2(double m) const { return horner(d2_, m); }
double ObjectiveFn::curvature_slope(double m) const { return horner(d1_shape_, m); }

double ObjectiveFn::tangent_gap(double omega, double m) const {
  double out = 0.0;
  kernels::scalar::tangent_gap(coeffs_, std::span<const double>(&omega, 1),
                               std::span<const double>(&m, 1), std::span<double>(&out, 1));
  return out;
}

void ObjectiveFn::eval_many(std::span<const double> xs, std::span<double> out) const {
  kernels::poly_eval(coeffs_, xs, out);
}
void ObjectiveFn::deriv1_many(std::span<const double> xs, std::span<double> out) const {
  kernels::poly_eval(d1_, xs, out);
}
void ObjectiveFn::deriv2_many(std::span<const double> xs, std::span<double> out) const {
  kernels::poly_eval(d2_, xs, out);
}
void ObjectiveFn::tangent_gap_many(std::span<const double> omegas, std::span<const double> ms,
                                   std::span<double> out) const {
  kernels::tangent_gap(coeffs_, omegas, ms, out);
}

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::convex: return "convex";
    case ShapeKind::concave: return "concave";
    case ShapeKind::affine: return "affine";
    case ShapeKind::s_shaped: return "s_shaped";
    case ShapeKind::m_shaped: return "m_shaped";
    case ShapeKind::other: return "other";
  }
  return "other";
}

ShapeReport classify_shape(const ObjectiveFn& v, int grid_points, double tol) {
  if (grid_points < 101) throw InvalidArgument("objective.invalid", "classify_shape needs grid_points >= 101");
  if (!(tol > 0.0)) throw InvalidArgument("objective.invalid", "classify_shape needs tol > 0");

  const std::vector<double> xs = uniform_grid(grid_points);
  std::vector<double> d2(xs.size());
  v.deriv2_many(xs, d2);

  // Runs of constant sign; each change remembers the last x of the old sign
  // and the first x of the new one.
  std::vector<int> signs;
  std::vector<Bracket> changes;
  double last_nonzero_x = 0.0;
  std::size_t zero_run = 0;
  bool saw_plateau = false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const int s = std::abs(d2[i]) < tol ? 0 : (d2[i] > 0.0 ? 1 : -1);
    if (s == 0) {
      if (++zero_run >= 2) saw_plateau = true;
      continue;
    }
    zero_run = 0;
    if (signs.empty()) {
      signs.push_back(s);
    } else if (s != signs.back()) {
      signs.push_back(s);
      changes.push_back({last_nonzero_x, xs[i]});
    }
    last_nonzero_x = xs[i];
  }

  if (signs.empty()) return {ShapeKind::affine, {}};
  if (saw_plateau)
    throw ShapeUnrecognized("V'' vanishes on an interval; strict curvature regions are required");
  if (changes.size() > 2)
    throw ShapeUnrecognized("V'' changes sign " + std::to_string(changes.size()) +
                            " times; at most two are supported");

  ShapeReport report;
  const BisectOptions opts{1e-12, 200};
  for (const Bracket& b : changes)
    report.inflections.push_back(bisect([&](double x) { return v.deriv2(x); }, b.lo, b.hi, opts));

  if (signs.size() == 1)
    report.kind = signs[0] > 0 ? ShapeKind::convex : ShapeKind::concave;
  else if (signs.size() == 2 && signs[0] > 0)
    report.kind = ShapeKind::s_shaped;
  else if (signs.size() == 3 && signs[0] < 0)
    report.kind = ShapeKind::m_shaped;
  else
    report.kind = ShapeKind::other;
  return report;
}

double tangent_gap(const ObjectiveFn& v, double omega, double m) { return v.tangent_gap(omega, m); }

namespace {

constexpr int kBitangentGrid = 1001;
constexpr int kNewtonIterations = 200;

struct TangencyResidual {
  double slope_gap;  // V'(m_R) - V'(m_L)
  double line_gap;   // Delta(m_R, m_L)
  double norm() const { return std::hypot(slope_gap, line_gap); }
};

TangencyResidual tangency_residual(const ObjectiveFn& v, double m_l, double m_r) {
  return {v.curvature_slope(m_r) - v.curvature_slope(m_l), v.tangent_gap(m_r, m_l)};
}

// Grid maximizers of V(m) - s*m on the two concave flanks, with s chosen by
// bisection so that both maxima are level.
std::array<double, 2> tilted_maximizers(const ObjectiveFn& v, double omega_l, double omega_r) {
  const std::vector<double> xs = uniform_grid(kBitangentGrid);
  std::vector<double> vals(xs.size());
  std::vector<double> slopes(xs.size());
  v.eval_many(xs, vals);
  v.deriv1_many(xs, slopes);

  struct Peak {
    double height;
    double x;
  };
  auto peak = [&](double s, bool left) {
    Peak best{-INFINITY, 0.0};
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (left ? xs[i] > omega_l : xs[i] < omega_r) continue;
      const double h = vals[i] - s * xs[i];
      if (h > best.height) best = {h, xs[i]};
    }
    return best;
  };
  auto imbalance = [&](double s) { return peak(s, true).height - peak(s, false).height; };

  double lo = *std::min_element(slopes.begin(), slopes.end());
  double hi = *std::max_element(slopes.begin(), slopes.end());
  double width = std::max(1.0, hi - lo);
  for (int i = 0; i < 60 && imbalance(lo) > 0.0; ++i, width *= 2.0) lo -= width;
  for (int i = 0; i < 60 && imbalance(hi) < 0.0; ++i, width *= 2.0) hi += width;
  const double s = bisect(imbalance, lo, hi, {1e-14 * std::max(1.0, std::abs(hi - lo)), 200});
  return {peak(s, true).x, peak(s, false).x};
}

}  // namespace

Bitangent solve_bitangent(const ObjectiveFn& v, const ShapeReport& shape) {
  if (shape.kind != ShapeKind::m_shaped || shape.inflections.size() != 2)
    throw NoBitangent("a bitangent requires an m-shaped objective (concave-convex-concave)");
  const double omega_l = shape.inflections[0];
  const double omega_r = shape.inflections[1];

  auto [m_l, m_r] = tilted_maximizers(v, omega_l, omega_r);
  TangencyResidual res = tangency_residual(v, m_l, m_r);
  bool converged = res.norm() == 0.0;
  for (int it = 0; it < kNewtonIterations && !converged; ++it) {
    const double a = -v.deriv2(m_l);
    const double b = v.deriv2(m_r);
    const double c = -v.deriv2(m_l) * (m_r - m_l);
    const double d = res.slope_gap;
    const double det = a * d - b * c;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double step_l = -(d * res.slope_gap - b * res.line_gap) / det;
    const double step_r = -(-c * res.slope_gap + a * res.line_gap) / det;

    // Halve the step until the residual norm decreases.
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const TangencyResidual trial = tangency_residual(v, m_l + t * step_l, m_r + t * step_r);
      if (trial.norm() < res.norm()) {
        m_l += t * step_l;
        m_r += t * step_r;
        res = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted || res.norm() == 0.0 || std::hypot(t * step_l, t * step_r) < 1e-16) converged = true;
  }

  if (!(std::abs(res.slope_gap) < 1e-10 && std::abs(res.line_gap) < 1e-10))
    throw NoBitangent("Newton iteration on the tangency residuals did not converge");
  if (!(0.0 < m_l && m_l < m_r && m_r < 1.0))
    throw NoBitangent("bitangent tangency points fall outside (0,1)");
  if (!(m_l < omega_l && m_r > omega_r))
    throw NoBitangent("bitangent tangency points are not in the concave flanks");

  Bitangent bt;
  bt.m_l = m_l;
  bt.m_r = m_r;
  bt.slope = v.deriv1(m_l);
  bt.intercept = v.eval(m_l) - bt.slope * m_l;
  return bt;
}

double concavify_at(const ObjectiveFn& v, const Bitangent& bt, double x) {
  if (x < bt.m_l || x > bt.m_r) return v.eval(x);
  const double span = bt.m_r - bt.m_l;
  return v.eval(bt.m_l) * (bt.m_r - x) / span + v.eval(bt.m_r) * (x - bt.m_l) / span;
}

}  // namespace mpersuade
