#pragma once

// Continuous state, m-shaped objective: the interval-disclosure / cutoff-rule
// / no-disclosure decision tree for optimal monotone signals, the bipooling
// condition and the two bipooling constructions that attain co V(E[w]).

#include <optional>
#include <string>
#include <vector>

#include "mpersuade/discrete_solver.hpp"
#include "mpersuade/objective.hpp"
#include "mpersuade/prior.hpp"
#include "mpersuade/signals.hpp"

namespace mpersuade {

enum class Branch { interval, cutoff, none };

std::string_view to_string(Branch branch);

// Pool [0, w_L*] and [w_R*, 1], separate the middle. A cutoff rule has
// w_L* = w_R*; branch none pools everything and reports w_L* = 0, w_R* = 1,
// m_L* = m_R* = E[w].
struct IntervalDisclosure {
  Branch branch = Branch::none;
  double omega_l = 0.0;
  double omega_r = 1.0;
  double m_l = 0.0;
  double m_r = 0.0;
  double value = 0.0;
};

PoolingSet pooling_set(const IntervalDisclosure& sol);

double pooling_value(const ContinuousPrior& prior, const ObjectiveFn& v, const PoolingSet& p);

// First-order residuals, written through the tangent gap so that they are
// exactly invariant to affine addends:
//   left   V(m_L) + V'(m_L)(w - m_L) - V(w) = -Delta(w, m_L),  m_L = E[w'|w' <= w]
//   right  V(m_R) + V'(m_R)(w - m_R) - V(w) = -Delta(w, m_R),  m_R = E[w'|w' >= w]
//   cutoff difference of the tangent lines at m_L and m_R, evaluated at w
double left_tangency_residual(const ContinuousPrior& prior, const ObjectiveFn& v, double omega);
double right_tangency_residual(const ContinuousPrior& prior, const ObjectiveFn& v, double omega);
double cutoff_residual(const ContinuousPrior& prior, const ObjectiveFn& v, double omega);

// V(m_L) F(w) + V(m_R)(1 - F(w)).
double cutoff_rule_value(const ContinuousPrior& prior, const ObjectiveFn& v, double omega);
// Value of pooling [0, a] and [b, 1] and separating (a, b).
double interval_disclosure_value(const ContinuousPrior& prior, const ObjectiveFn& v, double a, double b);

// Every admissible interior pair (roots of the left and right residuals in
// (w_L, w_R) with w_L* < w_R*), best value first.
std::vector<IntervalDisclosure> interval_disclosure_candidates(const ContinuousPrior& prior, const ObjectiveFn& v,
                                                               const ShapeReport& shape,
                                                               const SolverOptions& opts = {});
std::optional<IntervalDisclosure> solve_interval_disclosure(const ContinuousPrior& prior, const ObjectiveFn& v,
                                                            const ShapeReport& shape,
                                                            const SolverOptions& opts = {});

struct CutoffRoot {
  double omega = 0.0;
  double value = 0.0;
  double residual = 0.0;
};

// All bracketed roots of the cutoff residual on the scan grid, by position.
std::vector<CutoffRoot> cutoff_rule_roots(const ContinuousPrior& prior, const ObjectiveFn& v,
                                          const SolverOptions& opts = {});
// Best root by value (leftmost among ties), returned only if it beats no
// disclosure by more than opts.tie_tol.
std::optional<IntervalDisclosure> solve_cutoff_rule(const ContinuousPrior& prior, const ObjectiveFn& v,
                                                    const ShapeReport& shape, const SolverOptions& opts = {});

IntervalDisclosure solve_monotone_continuous(const ContinuousPrior& prior, const ObjectiveFn& v,
                                             const SolverOptions& opts = {});

struct BipoolingCertificate {
  bool holds = false;
  std::string reason;  // empty when holds
  std::optional<Bitangent> bitangent;
  double m_l = 0.0;
  double m_r = 0.0;
  double omega_ss = 0.0;  // E[w | w <= omega_ss] = m_L
  double excess = 0.0;    // E[w | w >= omega_ss] - m_R
};

BipoolingCertificate check_bipooling_condition(const ContinuousPrior& prior, const ObjectiveFn& v,
                                               const ShapeReport& shape);

enum class BipoolingMode { deterministic_nonmonotone, stochastic_monotone };

std::string_view to_string(BipoolingMode mode);

struct BipoolingSignal {
  BipoolingMode mode = BipoolingMode::deterministic_nonmonotone;
  // Deterministic: (omega_l, omega_r) pools to m_L, the rest to m_R.
  double omega_l = 0.0;
  double omega_r = 0.0;
  // Stochastic: states below omega_ss send the low realization with
  // probability q, every other state sends the high one.
  double omega_ss = 0.0;
  double q = 0.0;
  // Low then high realization, computed from the regions the signal uses.
  std::vector<Atom> atoms;
  double value = 0.0;
};

BipoolingSignal construct_bipooling(const ContinuousPrior& prior, const ObjectiveFn& v,
                                    const BipoolingCertificate& cert, BipoolingMode mode);

PosteriorDistribution induce_distribution(const BipoolingSignal& signal);

// The middle interval maps to a strictly lower posterior mean than the outer
// set and lies strictly inside its hull.
bool nonmonotonicity_witness(const BipoolingSignal& signal);
// Every state above omega_ss sends a realization distribution (point mass at
// m_R) that first-order dominates the one sent by states below it.
bool fosd_witness(const BipoolingSignal& signal);

struct UnrestrictedValue {
  double value = 0.0;
  bool bipooling = false;
  std::string description;
};

UnrestrictedValue unrestricted_value(const ContinuousPrior& prior, const ObjectiveFn& v,
                                     const SolverOptions& opts = {});

}  // namespace mpersuade
