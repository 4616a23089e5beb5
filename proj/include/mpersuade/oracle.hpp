#pragma once

// Exhaustive baselines: enumeration of monotone and arbitrary deterministic
// signals on a discrete support, and grid searches over the continuous signal
// families the solvers optimize.

#include <functional>
#include <optional>
#include <vector>

#include "mpersuade/objective.hpp"
#include "mpersuade/prior.hpp"
#include "mpersuade/signals.hpp"

namespace mpersuade {

// Blocks of support indices, each sorted, ordered by smallest member. Blocks
// need not be consecutive.
struct SetPartition {
  std::vector<std::vector<std::size_t>> blocks;

  bool operator==(const SetPartition&) const = default;
};

SetPartition to_set_partition(const MonotonePartition& p);
// The consecutive-block partition with the same blocks, if there is one.
std::optional<MonotonePartition> as_monotone(const SetPartition& p, std::size_t n);

enum class PartitionKind { monotone, all };

inline constexpr std::size_t kMaxMonotoneStates = 25;
inline constexpr std::size_t kMaxAllStates = 10;

// Streams every partition of n states to visit, in a fixed order: monotone
// partitions by cut bitmask, all partitions by restricted growth string in
// lexicographic order. Returns the count. Throws TooLarge past the caps and
// InvalidArgument for n = 0.
std::size_t enumerate_partitions(std::size_t n, PartitionKind kind,
                                 const std::function<void(const SetPartition&)>& visit);

double set_partition_value(const DiscretePrior& prior, const ObjectiveFn& v, const SetPartition& p);
PosteriorDistribution induce_distribution(const DiscretePrior& prior, const SetPartition& p);

struct BruteForceResult {
  // Every partition within tie_tol of the maximum, in enumeration order.
  std::vector<SetPartition> best;
  double value = 0.0;
  std::size_t evaluated = 0;
};

BruteForceResult brute_force(const DiscretePrior& prior, const ObjectiveFn& v, PartitionKind kind,
                             double tie_tol = 1e-12);

enum class GridFamily { interval_disclosure, bipooling_pairs, stochastic_uc_z };

std::string_view to_string(GridFamily family);

struct GridResult {
  GridFamily family = GridFamily::interval_disclosure;
  // interval_disclosure: (w_L, w_R) with [0, w_L] and [w_R, 1] pooled;
  // bipooling_pairs: (a, b) with (a, b) pooled and the rest pooled;
  // stochastic_uc_z: (z, j, q).
  std::vector<double> params;
  double value = 0.0;
};

// Exhaustive search on x_i = i/(K-1) (pairs i <= j for the two-parameter
// families) or, for stochastic_uc_z, on K equally spaced z in [w_1, w_n] of a
// discrete prior. The first grid point attaining the maximum wins. Throws
// InvalidArgument for K < 100 or a prior of the wrong kind.
GridResult grid_search_continuous(const Prior& prior, const ObjectiveFn& v, int k, GridFamily family);

}  // namespace mpersuade
