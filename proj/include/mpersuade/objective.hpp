#pragma once

// Objective functions V on [0,1] and the curvature geometry both solvers need:
// shape classification, the tangent gap Delta(omega, m), the bitangent of an
// m-shaped objective and the concavification along it.

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mpersuade {

// A polynomial objective, coefficients in ascending order. Every supported
// construction (raw polynomial, s-family, m-family, affine addend) is a
// polynomial, which keeps V, V', V'' and Delta exact and cheap in batch.
class ObjectiveFn {
public:
  static ObjectiveFn polynomial(std::vector<double> coeffs, std::string description = {});

  // V''(m) = omega_m - m, normalized by V(0) = V'(0) = 0.
  static ObjectiveFn s_family(double omega_m);

  // V''(m) = (m - omega_l)(omega_r - m), normalized by V(0) = V'(0) = 0.
  static ObjectiveFn m_family(double omega_l, double omega_r);

  // Returns V + a*m + b.
  ObjectiveFn with_affine(double a, double b) const;
  // Returns scale * V (scale > 0).
  ObjectiveFn scaled(double scale) const;

  double eval(double m) const;
  double deriv1(double m) const;
  double deriv2(double m) const;
  double operator()(double m) const { return eval(m); }

  // Delta(omega, m) = V(omega) - V(m) - V'(m)(omega - m). Independent of the
  // affine part of V bit-for-bit.
  double tangent_gap(double omega, double m) const;

  void eval_many(std::span<const double> xs, std::span<double> out) const;
  void deriv1_many(std::span<const double> xs, std::span<double> out) const;
  void deriv2_many(std::span<const double> xs, std::span<double> out) const;
  void tangent_gap_many(std::span<const double> omegas, std::span<const double> ms,
                        std::span<double> out) const;

  // V' with the constant (affine-slope) term dropped: differences of this
  // function equal differences of V' exactly, without the rounding an added
  // slope would introduce.
  double curvature_slope(double m) const;

  std::span<const double> coefficients() const { return coeffs_; }
  const std::string& description() const { return description_; }
  std::size_t degree() const { return coeffs_.size() - 1; }

private:
  ObjectiveFn(std::vector<double> coeffs, std::string description);

  std::vector<double> coeffs_;
  std::vector<double> d1_;
  std::vector<double> d2_;
  std::vector<double> d1_shape_;  // d1_ without its constant term
  std::string description_;
};

enum class ShapeKind { convex, concave, affine, s_shaped, m_shaped, other };

std::string_view to_string(ShapeKind kind);

struct ShapeReport {
  ShapeKind kind = ShapeKind::other;
  // [omega_M] for s_shaped, [omega_L, omega_R] for m_shaped, and the sign
  // changes of V'' for the other mixed kinds.
  std::vector<double> inflections;
};

// Samples V'' on a uniform grid; |V''| < tol counts as zero. Isolated zero
// samples are ignored, a run of two or more is a plateau and rejected unless
// V'' vanishes everywhere (affine). Inflections are refined by bisection on
// V'' to bracket width 1e-12.
//
// Throws ShapeUnrecognized for plateaus or more than two sign changes, and
// InvalidArgument for grid_points < 101.
ShapeReport classify_shape(const ObjectiveFn& v, int grid_points = 1001, double tol = 1e-12);

double tangent_gap(const ObjectiveFn& v, double omega, double m);

struct Bitangent {
  double m_l = 0.0;
  double m_r = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
};

// Unique line tangent to V at m_L in the left concave region and at m_R in
// the right concave region. Damped Newton on the tangency residuals
//   V'(m_R) - V'(m_L) = 0,   Delta(m_R, m_L) = 0,
// started from the grid maximizers of the tilted objective V(m) - s*m whose
// two local maxima are level. Throws NoBitangent when shape is not m_shaped,
// when Newton stalls, or when it lands outside 0 < m_L < m_R < 1.
Bitangent solve_bitangent(const ObjectiveFn& v, const ShapeReport& shape);

// Concavification along the bitangent chord: the chord value on [m_L, m_R],
// V(x) elsewhere.
double concavify_at(const ObjectiveFn& v, const Bitangent& bt, double x);

}  // namespace mpersuade
