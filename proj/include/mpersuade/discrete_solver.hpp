#pragma once

// Discrete state, s-shaped objective: stochastic upper censorship along the
// z-walk and the optimal monotone (deterministic upper-censorship) signal.

#include <vector>

#include "mpersuade/objective.hpp"
#include "mpersuade/prior.hpp"
#include "mpersuade/signals.hpp"

namespace mpersuade {

struct SolverOptions {
  double root_width = 1e-12;  // bisection bracket width
  int max_bisect = 200;
  double tie_tol = 1e-12;  // values closer than this are ties
  int scan_points = 400;   // continuous sign scans
  int shape_grid = 1001;
  double shape_tol = 1e-12;
};

// Sum over blocks of block mass times V(block mean).
double partition_value(const DiscretePrior& prior, const ObjectiveFn& v, const MonotonePartition& p);

// One point of the walk z in [w_1, w_n]: state w_j is separated with
// probability q, pooled with every state above it otherwise.
struct UcPoint {
  std::size_t j = 0;
  double q = 0.0;
  double m = 0.0;      // pooled mean
  double value = 0.0;  // W(z)
  double gap = 0.0;    // Delta(w_j, m)
};

// Precomputed prefix values and suffix masses of a prior so that points of
// the walk cost O(1).
class UcWalk {
public:
  UcWalk(const DiscretePrior& prior, const ObjectiveFn& v);

  // Throws InvalidArgument unless w_1 <= z <= w_n.
  UcPoint at(double z) const;
  // Point with cutoff index j and probability q in [0,1]. j = n-1 is full
  // disclosure for every q.
  UcPoint at_cutoff(std::size_t j, double q) const;
  double z_of(std::size_t j, double q) const;

  const DiscretePrior& prior() const { return prior_; }

private:
  DiscretePrior prior_;
  ObjectiveFn v_;
  std::vector<double> separated_value_;  // sum_{i<j} f_i V(w_i)
  std::vector<double> tail_mass_;        // sum_{i>j} f_i
  std::vector<double> tail_moment_;      // sum_{i>j} f_i w_i
};

UcPoint uc_walk(const DiscretePrior& prior, const ObjectiveFn& v, double z);

// Locates the single + to - crossing of z -> Delta(w_j(z), m(z)) segment by
// segment and refines it by bisection on q. Accepts s-shaped objectives and
// the degenerate convex/concave/affine kinds (which end at full or no
// disclosure); anything else throws ShapeError.
StochasticUpperCensorship solve_stochastic_uc(const DiscretePrior& prior, const ObjectiveFn& v,
                                              const SolverOptions& opts = {});

// Deterministic upper censorship (w_j, q) with q in {0, 1}.
struct UcLabel {
  std::size_t cutoff_index = 0;
  double cutoff_state = 0.0;
  int q = 0;

  bool operator==(const UcLabel&) const = default;
};

// Normalized label of an upper-censorship partition: q = 1 at the state just
// below the pooled tail, or (w_1, 0) when everything is pooled. Throws
// MalformedSignal if p is not upper censorship.
UcLabel canonical_label(const DiscretePrior& prior, const MonotonePartition& p);

struct MonotoneSolutionDiscrete {
  // Optimal partitions, coarsest first; the first is canonical.
  std::vector<MonotonePartition> best_partitions;
  // Label of each partition relative to the solver's cutoff w*.
  std::vector<UcLabel> labels;
  double value = 0.0;
  StochasticUpperCensorship stochastic;
};

MonotoneSolutionDiscrete solve_monotone_discrete(const DiscretePrior& prior, const ObjectiveFn& v,
                                                 const SolverOptions& opts = {});

}  // namespace mpersuade
