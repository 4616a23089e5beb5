#include "mpersuade/censorship.hpp"

#include <algorithm>
#include <cmath>

#include "mpersuade/errors.hpp"

namespace mpersuade {

namespace {

constexpr std::size_t kMaxEquivalenceOutlets = 12;

[[noreturn]] void invalid(const std::string& message) { throw InvalidArgument("censorship.invalid", message); }

void require_finite(const MediaEnvironment& env) {
  if (env.is_continuum()) invalid("operation needs a finite outlet set");
}

// Cell boundaries 0 = b_0 < c_1 < ... < c_{n-1} < b_n = 1.
std::vector<double> cell_edges(const MediaEnvironment& env) {
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), env.outlets().begin(), env.outlets().end());
  edges.push_back(1.0);
  return edges;
}

bool same_atoms(const PosteriorDistribution& a, const PosteriorDistribution& b, double tol, double& gap) {
  if (a.atoms().size() != b.atoms().size()) return false;
  for (std::size_t i = 0; i < a.atoms().size(); ++i) {
    gap = std::max({gap, std::abs(a.atoms()[i].mean - b.atoms()[i].mean), std::abs(a.atoms()[i].mass - b.atoms()[i].mass)});
    if (std::abs(a.atoms()[i].mean - b.atoms()[i].mean) > tol || std::abs(a.atoms()[i].mass - b.atoms()[i].mass) > tol)
      return false;
  }
  return true;
}

}  // namespace

MediaEnvironment::MediaEnvironment(ContinuousPrior quality, ObjectiveFn citizens, std::vector<double> outlets,
                                   bool continuum)
    : quality_(std::move(quality)), citizens_(std::move(citizens)), outlets_(std::move(outlets)), continuum_(continuum) {
  std::vector<double> xs(1001);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i) / 1000.0;
  std::vector<double> ys(xs.size());
  citizens_.eval_many(xs, ys);
  for (std::size_t i = 1; i < ys.size(); ++i)
    if (ys[i] < ys[i - 1] - 1e-12) invalid("citizen CDF must be nondecreasing on [0,1]");
}

MediaEnvironment MediaEnvironment::finite(ContinuousPrior quality, ObjectiveFn citizens, std::vector<double> outlets) {
  for (std::size_t i = 0; i < outlets.size(); ++i) {
    if (!(outlets[i] > 0.0 && outlets[i] < 1.0)) invalid("outlets must lie strictly inside (0,1)");
    if (i > 0 && !(outlets[i] > outlets[i - 1])) invalid("outlets must be strictly increasing");
  }
  if (outlets.size() >= 64) invalid("at most 63 outlets are supported");
  return MediaEnvironment(std::move(quality), std::move(citizens), std::move(outlets), false);
}

MediaEnvironment MediaEnvironment::continuum(ContinuousPrior quality, ObjectiveFn citizens) {
  return MediaEnvironment(std::move(quality), std::move(citizens), {}, true);
}

CensorshipPolicy CensorshipPolicy::from_mask(std::uint64_t mask, std::size_t outlets) {
  CensorshipPolicy p;
  for (std::size_t k = 0; k < outlets; ++k)
    if (mask >> k & 1U) p.censored.push_back(k);
  return p;
}

std::uint64_t CensorshipPolicy::mask() const {
  std::uint64_t m = 0;
  for (std::size_t k : censored) m |= std::uint64_t{1} << k;
  return m;
}

DiscretePrior induced_state_prior(const MediaEnvironment& env) {
  require_finite(env);
  const auto edges = cell_edges(env);
  const ContinuousPrior& t = env.quality();
  std::vector<double> support;
  std::vector<double> probs;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    support.push_back(t.conditional_mean(edges[i], edges[i + 1]));
    probs.push_back(t.mass(edges[i], edges[i + 1]));
    total += probs.back();
  }
  for (double& p : probs) p /= total;
  return DiscretePrior::create(std::move(support), std::move(probs));
}

MonotonePartition policy_to_partition(const MediaEnvironment& env, const CensorshipPolicy& policy) {
  require_finite(env);
  const std::size_t outlets = env.outlets().size();
  for (std::size_t k : policy.censored)
    if (k >= outlets) invalid("censored outlet index out of range");
  const std::uint64_t all = outlets == 0 ? 0 : (~std::uint64_t{0} >> (64 - outlets));
  return MonotonePartition::from_cuts(all & ~policy.mask(), outlets + 1);
}

CensorshipPolicy partition_to_policy(const MediaEnvironment& env, const MonotonePartition& p) {
  require_finite(env);
  if (p.states() != env.outlets().size() + 1) throw MalformedSignal("partition size does not match the outlet cells");
  CensorshipPolicy policy;
  for (const Block& b : p.blocks())
    for (std::size_t k = b.first; k < b.last; ++k) policy.censored.push_back(k);
  return policy;
}

CensorshipPolicy partition_to_policy(const MediaEnvironment& env, const SetPartition& p) {
  const auto mp = as_monotone(p, env.outlets().size() + 1);
  if (!mp) throw NonmonotoneSignal("no censorship policy pools nonadjacent cells while separating a cell between them");
  return partition_to_policy(env, *mp);
}

PosteriorDistribution policy_distribution(const MediaEnvironment& env, const CensorshipPolicy& policy) {
  const MonotonePartition p = policy_to_partition(env, policy);
  const auto edges = cell_edges(env);
  const ContinuousPrior& t = env.quality();
  const double total = t.mass(0.0, 1.0);
  std::vector<Atom> atoms;
  for (const Block& b : p.blocks()) {
    const double lo = edges[b.first];
    const double hi = edges[b.last + 1];
    atoms.push_back({t.conditional_mean(lo, hi), t.mass(lo, hi) / total});
  }
  return PosteriorDistribution::from_atoms(std::move(atoms));
}

double policy_value(const MediaEnvironment& env, const CensorshipPolicy& policy) {
  const PosteriorDistribution g = policy_distribution(env, policy);
  double total = 0.0;
  for (const Atom& a : g.atoms()) total += a.mass * env.citizens().eval(a.mean);
  return total;
}

EquivalenceReport verify_outcome_equivalence(const MediaEnvironment& env, double tol) {
  require_finite(env);
  const std::size_t outlets = env.outlets().size();
  if (outlets > kMaxEquivalenceOutlets) invalid("outcome equivalence is checked for at most 12 outlets");
  const DiscretePrior prior = induced_state_prior(env);
  const std::size_t n = outlets + 1;

  EquivalenceReport report;
  report.round_trip = true;
  report.bijection = true;
  std::vector<PosteriorDistribution> from_policies;
  const std::uint64_t count = std::uint64_t{1} << outlets;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    const auto policy = CensorshipPolicy::from_mask(mask, outlets);
    const auto partition = policy_to_partition(env, policy);
    if (!(partition_to_policy(env, partition) == policy)) report.round_trip = false;
    from_policies.push_back(policy_distribution(env, policy));
    if (!same_atoms(from_policies.back(), induce_distribution(prior, partition), tol, report.max_atom_gap))
      report.bijection = false;
  }
  report.policies = from_policies.size();

  std::vector<PosteriorDistribution> from_partitions;
  enumerate_partitions(n, PartitionKind::monotone, [&](const SetPartition& sp) {
    from_partitions.push_back(induce_distribution(prior, *as_monotone(sp, n)));
  });
  report.partitions = from_partitions.size();

  // Set equality: every policy distribution matches a distinct partition one.
  report.sets_equal = from_policies.size() == from_partitions.size();
  std::vector<bool> used(from_partitions.size(), false);
  for (const auto& g : from_policies) {
    bool found = false;
    for (std::size_t i = 0; i < from_partitions.size() && !found; ++i) {
      double gap = 0.0;
      if (!used[i] && same_atoms(g, from_partitions[i], tol, gap)) used[i] = found = true;
    }
    if (!found) report.sets_equal = false;
  }
  report.pass = report.round_trip && report.bijection && report.sets_equal;
  return report;
}

CensorshipResult optimal_censorship(const MediaEnvironment& env, const SolverOptions& opts) {
  CensorshipResult result;
  if (!env.is_continuum()) {
    const DiscretePrior prior = induced_state_prior(env);
    const MonotoneSolutionDiscrete sol = solve_monotone_discrete(prior, env.citizens(), opts);
    for (const MonotonePartition& p : sol.best_partitions) result.policies.push_back(partition_to_policy(env, p));
    result.value = policy_value(env, result.policies.front());
    result.description = "censor every outlet above the cutoff";
    result.unrestricted_value = sol.stochastic.value;
    result.unrestricted_description = "stochastic upper censorship (not a censorship policy)";
    return result;
  }

  const IntervalDisclosure sol = solve_monotone_continuous(env.quality(), env.citizens(), opts);
  result.value = sol.value;
  switch (sol.branch) {
    case Branch::none:
      result.description = "censor all outlets";
      break;
    case Branch::cutoff:
      result.permitted = {{sol.omega_l, sol.omega_l}};
      result.description = "permit the single outlet at the cutoff";
      break;
    case Branch::interval:
      result.permitted = {{sol.omega_l, sol.omega_r}};
      result.description = "permit exactly the outlets in the middle interval";
      break;
  }
  const UnrestrictedValue u = unrestricted_value(env.quality(), env.citizens(), opts);
  result.unrestricted_value = u.value;
  result.unrestricted_description =
      u.bipooling ? "bipooling (not a censorship policy)" : "monotone optimum is unrestricted-optimal";
  return result;
}

}  // namespace mpersuade
