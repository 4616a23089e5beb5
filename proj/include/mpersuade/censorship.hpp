#pragma once

// Media censorship: outlets with editorial thresholds cut the quality space
// into cells, censoring an outlet merges the two cells it separates, and the
// government's problem becomes monotone persuasion over the induced prior.

#include <cstdint>
#include <string>
#include <vector>

#include "mpersuade/continuous_solver.hpp"
#include "mpersuade/discrete_solver.hpp"
#include "mpersuade/objective.hpp"
#include "mpersuade/oracle.hpp"
#include "mpersuade/prior.hpp"
#include "mpersuade/signals.hpp"

namespace mpersuade {

class MediaEnvironment {
public:
  // Outlets strictly increasing inside (0,1); the citizen CDF nondecreasing
  // on a 1001-point grid (within 1e-12). Throws InvalidArgument otherwise.
  static MediaEnvironment finite(ContinuousPrior quality, ObjectiveFn citizens, std::vector<double> outlets);
  // Every threshold in [0,1] is an outlet.
  static MediaEnvironment continuum(ContinuousPrior quality, ObjectiveFn citizens);

  const ContinuousPrior& quality() const { return quality_; }
  const ObjectiveFn& citizens() const { return citizens_; }
  bool is_continuum() const { return continuum_; }
  // Finite outlets only; empty for the continuum.
  const std::vector<double>& outlets() const { return outlets_; }

private:
  MediaEnvironment(ContinuousPrior quality, ObjectiveFn citizens, std::vector<double> outlets, bool continuum);

  ContinuousPrior quality_;
  ObjectiveFn citizens_;
  std::vector<double> outlets_;
  bool continuum_ = false;
};

// Censored outlets, as sorted indices into env.outlets().
struct CensorshipPolicy {
  std::vector<std::size_t> censored;

  static CensorshipPolicy from_mask(std::uint64_t mask, std::size_t outlets);
  std::uint64_t mask() const;
  bool operator==(const CensorshipPolicy&) const = default;
};

// States are the T-conditional means of the cells cut by the outlets, with
// the cells' T-masses as probabilities.
DiscretePrior induced_state_prior(const MediaEnvironment& env);

MonotonePartition policy_to_partition(const MediaEnvironment& env, const CensorshipPolicy& policy);
CensorshipPolicy partition_to_policy(const MediaEnvironment& env, const MonotonePartition& p);
// Throws NonmonotoneSignal unless the blocks are consecutive.
CensorshipPolicy partition_to_policy(const MediaEnvironment& env, const SetPartition& p);

// Distribution of the citizens' posterior mean under a policy, computed
// directly from T over the merged cells.
PosteriorDistribution policy_distribution(const MediaEnvironment& env, const CensorshipPolicy& policy);
double policy_value(const MediaEnvironment& env, const CensorshipPolicy& policy);

struct EquivalenceReport {
  bool pass = false;
  std::size_t policies = 0;
  std::size_t partitions = 0;
  bool round_trip = false;   // policy -> partition -> policy is the identity
  bool bijection = false;    // each policy's distribution equals its partition's
  bool sets_equal = false;   // the two sets of distributions coincide
  double max_atom_gap = 0.0;
};

// Exhaustive check over all 2^|C| policies and monotone partitions (finite C,
// |C| <= 12; throws InvalidArgument otherwise).
EquivalenceReport verify_outcome_equivalence(const MediaEnvironment& env, double tol = 1e-12);

struct CensorshipResult {
  // Finite C: optimal policies (ties as in the discrete solver), canonical
  // first. Continuum: empty.
  std::vector<CensorshipPolicy> policies;
  // Continuum: permitted thresholds; a single point interval for a cutoff
  // rule, empty when everything is censored.
  std::vector<Interval> permitted;
  double value = 0.0;
  std::string description;
  // Unrestricted benchmark: stochastic upper censorship (finite) or
  // bipooling / monotone optimum (continuum). Not implementable by
  // censorship alone.
  double unrestricted_value = 0.0;
  std::string unrestricted_description;
};

CensorshipResult optimal_censorship(const MediaEnvironment& env, const SolverOptions& opts = {});

}  // namespace mpersuade
