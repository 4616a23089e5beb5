#include "mpersuade/discrete_solver.hpp"

#include <algorithm>
#include <cmath>

#include "mpersuade/errors.hpp"
#include "mpersuade/root_finding.hpp"

namespace mpersuade {

namespace {

void require_discrete_shape(const ObjectiveFn& v, const SolverOptions& opts) {
  const ShapeReport shape = classify_shape(v, opts.shape_grid, opts.shape_tol);
  switch (shape.kind) {
    case ShapeKind::s_shaped:
    case ShapeKind::convex:
    case ShapeKind::concave:
    case ShapeKind::affine:
      return;
    default:
      throw ShapeError("discrete_solver.shape_error",
                       "discrete solver needs an s-shaped objective, got " + std::string(to_string(shape.kind)));
  }
}

}  // namespace

double partition_value(const DiscretePrior& prior, const ObjectiveFn& v, const MonotonePartition& p) {
  if (p.states() != prior.size()) throw MalformedSignal("partition size does not match the prior support");
  double total = 0.0;
  for (const Block& b : p.blocks()) total += prior.block_mass(b.first, b.last) * v.eval(prior.block_mean(b.first, b.last));
  return total;
}

UcWalk::UcWalk(const DiscretePrior& prior, const ObjectiveFn& v) : prior_(prior), v_(v) {
  const std::size_t n = prior_.size();
  const auto w = prior_.support();
  const auto f = prior_.probs();
  separated_value_.assign(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) separated_value_[j] = separated_value_[j - 1] + f[j - 1] * v_.eval(w[j - 1]);
  tail_mass_.assign(n, 0.0);
  tail_moment_.assign(n, 0.0);
  for (std::size_t j = n - 1; j-- > 0;) {
    tail_mass_[j] = tail_mass_[j + 1] + f[j + 1];
    tail_moment_[j] = tail_moment_[j + 1] + f[j + 1] * w[j + 1];
  }
}

UcPoint UcWalk::at_cutoff(std::size_t j, double q) const {
  const std::size_t n = prior_.size();
  if (j >= n || !(q >= 0.0 && q <= 1.0)) throw InvalidArgument("discrete_solver.invalid", "cutoff index or q out of range");
  if (j == n - 1) q = 0.0;
  const auto w = prior_.support();
  const auto f = prior_.probs();
  UcPoint pt;
  pt.j = j;
  pt.q = q;
  const double pooled_mass = (1.0 - q) * f[j] + tail_mass_[j];
  const double pooled_moment = (1.0 - q) * f[j] * w[j] + tail_moment_[j];
  pt.m = std::clamp(pooled_moment / pooled_mass, w[j], w[n - 1]);
  pt.value = separated_value_[j] + q * f[j] * v_.eval(w[j]) + pooled_mass * v_.eval(pt.m);
  pt.gap = v_.tangent_gap(w[j], pt.m);
  return pt;
}

double UcWalk::z_of(std::size_t j, double q) const {
  const auto w = prior_.support();
  if (j + 1 >= w.size()) return w.back();
  return (1.0 - q) * w[j] + q * w[j + 1];
}

UcPoint UcWalk::at(double z) const {
  const auto w = prior_.support();
  if (!(z >= w.front() && z <= w.back()))
    throw InvalidArgument("discrete_solver.invalid", "z must lie in [w_1, w_n]");
  const auto it = std::upper_bound(w.begin(), w.end(), z);
  const std::size_t j = static_cast<std::size_t>(it - w.begin()) - 1;
  if (j + 1 >= w.size()) return at_cutoff(j, 0.0);
  return at_cutoff(j, std::clamp((z - w[j]) / (w[j + 1] - w[j]), 0.0, 1.0));
}

UcPoint uc_walk(const DiscretePrior& prior, const ObjectiveFn& v, double z) { return UcWalk(prior, v).at(z); }

StochasticUpperCensorship solve_stochastic_uc(const DiscretePrior& prior, const ObjectiveFn& v,
                                              const SolverOptions& opts) {
  require_discrete_shape(v, opts);
  const UcWalk walk(prior, v);
  const std::size_t n = prior.size();

  auto finish = [&](const UcPoint& pt, UcRegime regime) {
    StochasticUpperCensorship uc;
    uc.cutoff_index = pt.j;
    uc.cutoff_state = prior.support()[pt.j];
    uc.q = pt.q;
    uc.pooled_mean = pt.m;
    uc.value = pt.value;
    uc.tangency_residual = -pt.gap;
    uc.regime = regime;
    return uc;
  };

  const UcPoint start = walk.at_cutoff(0, 0.0);
  if (start.gap <= 0.0) return finish(start, n == 1 ? UcRegime::tangency : UcRegime::no_disclosure);

  for (std::size_t j = 0; j + 1 < n; ++j) {
    const UcPoint head = walk.at_cutoff(j, 0.0);
    if (head.gap <= 0.0) return finish(head, head.gap == 0.0 ? UcRegime::tangency : UcRegime::knot);
    const UcPoint tail = walk.at_cutoff(j, 1.0);
    if (tail.gap > 0.0) continue;
    if (tail.gap == 0.0) return finish(tail, UcRegime::tangency);
    const double q = bisect([&](double x) { return walk.at_cutoff(j, x).gap; }, 0.0, 1.0,
                            {opts.root_width, opts.max_bisect});
    return finish(walk.at_cutoff(j, q), UcRegime::tangency);
  }
  return finish(walk.at_cutoff(n - 1, 0.0), UcRegime::tangency);
}

UcLabel canonical_label(const DiscretePrior& prior, const MonotonePartition& p) {
  if (p.states() != prior.size() || !p.is_upper_censorship())
    throw MalformedSignal("canonical labels exist only for upper-censorship partitions");
  const std::size_t k = p.pool_start();
  if (k == 0) return {0, prior.support()[0], 0};
  return {k - 1, prior.support()[k - 1], 1};
}

MonotoneSolutionDiscrete solve_monotone_discrete(const DiscretePrior& prior, const ObjectiveFn& v,
                                                 const SolverOptions& opts) {
  MonotoneSolutionDiscrete sol;
  sol.stochastic = solve_stochastic_uc(prior, v, opts);
  const std::size_t n = prior.size();
  const std::size_t j = sol.stochastic.cutoff_index;
  const double w = sol.stochastic.cutoff_state;

  struct Candidate {
    MonotonePartition partition;
    UcLabel label;
    double value;
  };
  std::vector<Candidate> candidates;
  for (int q : {0, 1}) {
    const std::size_t pool_start = std::min(j + static_cast<std::size_t>(q), n - 1);
    auto p = MonotonePartition::upper_censorship(n, pool_start);
    if (!candidates.empty() && candidates.front().partition == p) continue;
    const double value = partition_value(prior, v, p);
    candidates.push_back({std::move(p), {j, w, q}, value});
  }

  double best = -INFINITY;
  for (const Candidate& c : candidates) best = std::max(best, c.value);
  for (const Candidate& c : candidates) {
    if (best - c.value > opts.tie_tol) continue;
    sol.best_partitions.push_back(c.partition);
    sol.labels.push_back(c.label);
  }
  // Candidates are generated q = 0 first, i.e. already coarsest first.
  sol.value = best;
  return sol;
}

}  // namespace mpersuade
