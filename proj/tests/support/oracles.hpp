#pragma once

// Reference computations used to check the library. Everything here works
// from raw coefficients, densities and probability vectors with the most
// direct formula available (power sums, adaptive Simpson, dense grids,
// exhaustive loops), sharing no code with the solvers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace ref {

using Coeffs = std::vector<double>;

// V(x) = sum c_k x^k with explicit powers.
inline double poly(const Coeffs& c, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * std::pow(x, static_cast<double>(k));
  return s;
}

inline double poly_d1(const Coeffs& c, double x) {
  double s = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) s += static_cast<double>(k) * c[k] * std::pow(x, static_cast<double>(k - 1));
  return s;
}

inline double tangent_gap(const Coeffs& c, double omega, double m) {
  return poly(c, omega) - poly(c, m) - poly_d1(c, m) * (omega - m);
}

// V'' = omega_m - m, V(0) = V'(0) = 0.
inline Coeffs s_family(double omega_m) { return {0.0, 0.0, omega_m / 2.0, -1.0 / 6.0}; }

// V'' = (m - l)(r - m) = -m^2 + (l + r) m - l r, V(0) = V'(0) = 0.
inline Coeffs m_family(double l, double r) { return {0.0, 0.0, -l * r / 2.0, (l + r) / 6.0, -1.0 / 12.0}; }

inline Coeffs plus_affine(Coeffs c, double a, double b) {
  if (c.size() < 2) c.resize(2, 0.0);
  c[0] += b;
  c[1] += a;
  return c;
}

inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}
}  // namespace detail

// Adaptive Simpson with Richardson correction.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13, int depth = 40) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

// A density on [0,1] with the points where it is not smooth, so quadrature
// never straddles a kink.
struct Density {
  std::function<double(double)> f;
  std::vector<double> kinks;
};

inline Density piecewise_uniform(const std::vector<std::vector<double>>& pieces) {
  Density d;
  d.f = [pieces](double x) {
    for (const auto& p : pieces)
      if (x >= p[0] && x <= p[1]) return p[2] / (p[1] - p[0]);
    return 0.0;
  };
  for (const auto& p : pieces) d.kinks.push_back(p[0]);
  d.kinks.push_back(1.0);
  return d;
}

// Integral of x^k f(x) over [a, b].
inline double moment(const Density& d, int k, double a, double b) {
  std::vector<double> cuts{a};
  for (double x : d.kinks)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    // Evaluate strictly inside each piece so piece boundaries never leak.
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const double eps = (hi - lo) * 1e-15;
    total += simpson([&](double x) { return std::pow(std::clamp(x, lo + eps, hi - eps), k) * d.f(std::clamp(x, lo + eps, hi - eps)); },
                     lo, hi);
  }
  return total;
}

inline double mass(const Density& d, double a, double b) { return moment(d, 0, a, b); }
inline double conditional_mean(const Density& d, double a, double b) { return moment(d, 1, a, b) / mass(d, a, b); }

// Integral of V f over [a, b].
inline double integrate(const Density& d, const Coeffs& c, double a, double b) {
  double total = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) total += c[k] * moment(d, static_cast<int>(k), a, b);
  return total;
}

// Pool [0, a] and [b, 1], separate the middle.
inline double interval_value(const Density& d, const Coeffs& c, double a, double b) {
  double v = integrate(d, c, a, b);
  if (a > 0.0) v += mass(d, 0.0, a) * poly(c, conditional_mean(d, 0.0, a));
  if (b < 1.0) v += mass(d, b, 1.0) * poly(c, conditional_mean(d, b, 1.0));
  return v;
}

inline double cutoff_value(const Density& d, const Coeffs& c, double w) { return interval_value(d, c, w, w); }

// ---------------------------------------------------------------------------
// Discrete priors.

struct Discrete {
  std::vector<double> support;
  std::vector<double> probs;
};

inline double mean(const Discrete& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.support.size(); ++i) s += p.support[i] * p.probs[i];
  return s;
}

// Value of a deterministic signal given as a block index per state.
inline double labelled_value(const Discrete& p, const Coeffs& c, const std::vector<int>& block_of) {
  const int blocks = *std::max_element(block_of.begin(), block_of.end()) + 1;
  std::vector<double> mass(blocks, 0.0);
  std::vector<double> moment(blocks, 0.0);
  for (std::size_t i = 0; i < block_of.size(); ++i) {
    mass[block_of[i]] += p.probs[i];
    moment[block_of[i]] += p.probs[i] * p.support[i];
  }
  double v = 0.0;
  for (int b = 0; b < blocks; ++b) v += mass[b] * poly(c, moment[b] / mass[b]);
  return v;
}

// Exhaustive maximum over consecutive-block partitions.
inline double monotone_max(const Discrete& p, const Coeffs& c) {
  const std::size_t n = p.support.size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t cuts = 0; cuts < (std::uint64_t{1} << (n - 1)); ++cuts) {
    std::vector<int> block_of(n, 0);
    for (std::size_t i = 1; i < n; ++i) block_of[i] = block_of[i - 1] + static_cast<int>(cuts >> (i - 1) & 1U);
    best = std::max(best, labelled_value(p, c, block_of));
  }
  return best;
}

// Exhaustive maximum over all set partitions, by recursive block assignment.
inline double all_partitions_max(const Discrete& p, const Coeffs& c) {
  const std::size_t n = p.support.size();
  std::vector<int> block_of(n, 0);
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, int)> go = [&](std::size_t i, int used) {
    if (i == n) {
      best = std::max(best, labelled_value(p, c, block_of));
      return;
    }
    for (int b = 0; b <= used; ++b) {
      block_of[i] = b;
      go(i + 1, std::max(used, b + 1));
    }
  };
  block_of[0] = 0;
  go(1, 1);
  return best;
}

// Stochastic upper censorship at index j with separation probability q,
// straight from the definition: states below j separated, state j separated
// with probability q, the rest pooled.
struct UcEval {
  double m;
  double value;
};

inline UcEval uc_eval(const Discrete& p, const Coeffs& c, std::size_t j, double q) {
  double value = 0.0;
  for (std::size_t i = 0; i < j; ++i) value += p.probs[i] * poly(c, p.support[i]);
  value += q * p.probs[j] * poly(c, p.support[j]);
  double pool_mass = (1.0 - q) * p.probs[j];
  double pool_moment = (1.0 - q) * p.probs[j] * p.support[j];
  for (std::size_t i = j + 1; i < p.support.size(); ++i) {
    pool_mass += p.probs[i];
    pool_moment += p.probs[i] * p.support[i];
  }
  if (pool_mass <= 0.0) return {p.support[j], value};
  const double m = pool_moment / pool_mass;
  return {m, value + pool_mass * poly(c, m)};
}

// Best stochastic upper censorship: a dense scan of q in every segment,
// refined by golden-section search around the best sample.
struct UcMax {
  std::size_t j;
  double q;
  double value;
};

inline UcMax dense_uc_max(const Discrete& p, const Coeffs& c, int samples = 2000) {
  UcMax best{0, 0.0, -std::numeric_limits<double>::infinity()};
  const std::size_t n = p.support.size();
  for (std::size_t j = 0; j < n; ++j) {
    double bq = 0.0;
    double bv = -std::numeric_limits<double>::infinity();
    for (int s = 0; s <= samples; ++s) {
      const double q = static_cast<double>(s) / samples;
      const double v = uc_eval(p, c, j, q).value;
      if (v > bv) {
        bv = v;
        bq = q;
      }
    }
    double lo = std::max(0.0, bq - 1.0 / samples);
    double hi = std::min(1.0, bq + 1.0 / samples);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double x1 = hi - g * (hi - lo);
      const double x2 = lo + g * (hi - lo);
      if (uc_eval(p, c, j, x1).value >= uc_eval(p, c, j, x2).value)
        hi = x2;
      else
        lo = x1;
    }
    for (double q : {lo, hi, bq}) {
      const double v = uc_eval(p, c, j, q).value;
      if (v > best.value) best = {j, q, v};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Bitangent by bisection on the slope: for the right slope s the tilted
// objective V(m) - s m has equally high maxima left and right of split.

struct Bitangent {
  double m_l;
  double m_r;
  double slope;
};

inline double golden_argmax(const std::function<double(double)>& f, double lo, double hi, int samples = 4000) {
  double bx = lo;
  double bv = -std::numeric_limits<double>::infinity();
  for (int s = 0; s <= samples; ++s) {
    const double x = lo + (hi - lo) * s / samples;
    if (f(x) > bv) {
      bv = f(x);
      bx = x;
    }
  }
  double a = std::max(lo, bx - (hi - lo) / samples);
  double b = std::min(hi, bx + (hi - lo) / samples);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double x1 = b - g * (b - a);
    const double x2 = a + g * (b - a);
    if (f(x1) >= f(x2))
      b = x2;
    else
      a = x1;
  }
  return 0.5 * (a + b);
}

inline Bitangent bitangent(const Coeffs& c, double split) {
  auto level_gap = [&](double s, double& ml, double& mr) {
    auto tilted = [&](double m) { return poly(c, m) - s * m; };
    ml = golden_argmax(tilted, 0.0, split);
    mr = golden_argmax(tilted, split, 1.0);
    return tilted(ml) - tilted(mr);
  };
  double lo = -100.0;
  double hi = 100.0;
  double ml = 0.0;
  double mr = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double s = 0.5 * (lo + hi);
    // Larger slopes penalize the right maximum more.
    if (level_gap(s, ml, mr) > 0.0)
      hi = s;
    else
      lo = s;
  }
  level_gap(0.5 * (lo + hi), ml, mr);
  return {ml, mr, 0.5 * (lo + hi)};
}

}  // namespace ref
