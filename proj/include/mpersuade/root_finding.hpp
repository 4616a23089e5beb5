#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace mpersuade {

struct BisectOptions {
  double width = 1e-12;  // final bracket width
  int max_iterations = 200;
};

// Sign-based bisection. Requires f(lo) and f(hi) to have opposite signs (or
// one of them to vanish); returns the midpoint of the final bracket.
template <class F>
double bisect(F&& f, double lo, double hi, const BisectOptions& opts = {}) {
  double f_lo = f(lo);
  if (f_lo == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  const bool lo_positive = f_lo > 0.0;
  for (int it = 0; it < opts.max_iterations && hi - lo > opts.width; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == lo_positive)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Brackets [x_k, x_{k+1}] of a sampled function whose signs differ. An exact
// zero at a sample is reported as a degenerate bracket [x_k, x_k].
struct Bracket {
  double lo;
  double hi;
};

inline std::vector<Bracket> sign_change_brackets(const std::vector<double>& xs,
                                                 const std::vector<double>& ys) {
  std::vector<Bracket> out;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (ys[k] == 0.0) {
      out.push_back({xs[k], xs[k]});
      continue;
    }
    if (k + 1 < xs.size() && ys[k + 1] != 0.0 && std::signbit(ys[k]) != std::signbit(ys[k + 1]))
      out.push_back({xs[k], xs[k + 1]});
  }
  return out;
}

}  // namespace mpersuade
