#include "mpersuade/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpersuade/discrete_solver.hpp"
#include "mpersuade/errors.hpp"
#include "mpersuade/parallel.hpp"

namespace mpersuade {

namespace {

SetPartition from_cuts(std::uint64_t cuts, std::size_t n) {
  SetPartition p;
  p.blocks.emplace_back();
  for (std::size_t i = 0; i < n; ++i) {
    p.blocks.back().push_back(i);
    if (i + 1 < n && (cuts >> i & 1U)) p.blocks.emplace_back();
  }
  return p;
}

SetPartition from_growth_string(const std::vector<std::size_t>& a) {
  SetPartition p;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == p.blocks.size()) p.blocks.emplace_back();
    p.blocks[a[i]].push_back(i);
  }
  return p;
}

void check_caps(std::size_t n, PartitionKind kind) {
  if (n == 0) throw InvalidArgument("oracle.invalid", "enumeration needs at least one state");
  if (kind == PartitionKind::monotone && n > kMaxMonotoneStates)
    throw TooLarge("monotone enumeration is capped at " + std::to_string(kMaxMonotoneStates) + " states");
  if (kind == PartitionKind::all && n > kMaxAllStates)
    throw TooLarge("set-partition enumeration is capped at " + std::to_string(kMaxAllStates) + " states");
}

}  // namespace

SetPartition to_set_partition(const MonotonePartition& p) {
  SetPartition out;
  for (const Block& b : p.blocks()) {
    out.blocks.emplace_back();
    for (std::size_t i = b.first; i <= b.last; ++i) out.blocks.back().push_back(i);
  }
  return out;
}

std::optional<MonotonePartition> as_monotone(const SetPartition& p, std::size_t n) {
  std::vector<Block> blocks;
  for (const auto& b : p.blocks) {
    if (b.empty() || b.back() - b.front() + 1 != b.size()) return std::nullopt;
    blocks.push_back({b.front(), b.back()});
  }
  std::sort(blocks.begin(), blocks.end());
  try {
    return MonotonePartition::from_blocks(std::move(blocks), n);
  } catch (const MalformedSignal&) {
    return std::nullopt;
  }
}

std::size_t enumerate_partitions(std::size_t n, PartitionKind kind,
                                 const std::function<void(const SetPartition&)>& visit) {
  check_caps(n, kind);
  if (kind == PartitionKind::monotone) {
    const std::uint64_t total = std::uint64_t{1} << (n - 1);
    for (std::uint64_t cuts = 0; cuts < total; ++cuts) visit(from_cuts(cuts, n));
    return static_cast<std::size_t>(total);
  }
  // Restricted growth strings a_0 = 0, a_i <= 1 + max(a_0..a_{i-1}).
  std::vector<std::size_t> a(n, 0);
  std::vector<std::size_t> prefix_max(n, 0);
  std::size_t count = 0;
  while (true) {
    visit(from_growth_string(a));
    ++count;
    std::size_t i = n;
    while (i-- > 1) {
      if (a[i] <= prefix_max[i - 1]) break;
    }
    if (i == 0) break;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (std::size_t k = i + 1; k < n; ++k) {
      a[k] = 0;
      prefix_max[k] = prefix_max[i];
    }
  }
  return count;
}

double set_partition_value(const DiscretePrior& prior, const ObjectiveFn& v, const SetPartition& p) {
  induce_distribution(prior, p);  // validates the blocks
  const auto w = prior.support();
  const auto f = prior.probs();
  double total = 0.0;
  for (const auto& block : p.blocks) {
    double mass = 0.0;
    double moment = 0.0;
    for (std::size_t i : block) {
      mass += f[i];
      moment += f[i] * w[i];
    }
    total += mass * v.eval(std::clamp(moment / mass, w[block.front()], w[block.back()]));
  }
  return total;
}

PosteriorDistribution induce_distribution(const DiscretePrior& prior, const SetPartition& p) {
  const auto w = prior.support();
  const auto f = prior.probs();
  std::vector<Atom> atoms;
  std::vector<bool> seen(prior.size(), false);
  for (const auto& block : p.blocks) {
    double mass = 0.0;
    double moment = 0.0;
    for (std::size_t i : block) {
      if (i >= prior.size() || seen[i]) throw MalformedSignal("set partition blocks must be disjoint support indices");
      seen[i] = true;
      mass += f[i];
      moment += f[i] * w[i];
    }
    if (block.empty()) throw MalformedSignal("set partition blocks must be nonempty");
    atoms.push_back({std::clamp(moment / mass, w[block.front()], w[block.back()]), mass});
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw MalformedSignal("set partition does not cover every state");
  return PosteriorDistribution::from_atoms(std::move(atoms));
}

BruteForceResult brute_force(const DiscretePrior& prior, const ObjectiveFn& v, PartitionKind kind, double tie_tol) {
  const std::size_t n = prior.size();
  check_caps(n, kind);

  struct ShardBest {
    double value = -INFINITY;
    std::vector<std::pair<double, SetPartition>> near;
    std::size_t evaluated = 0;

    void offer(double value, SetPartition p, double tol) {
      ++evaluated;
      if (value < this->value - tol) return;
      if (value > this->value) {
        this->value = value;
        std::erase_if(near, [&](const auto& e) { return e.first < value - tol; });
      }
      near.emplace_back(value, std::move(p));
    }
  };

  std::vector<ShardBest> shards;
  if (kind == PartitionKind::monotone) {
    const std::size_t total = std::size_t{1} << (n - 1);
    shards.resize(shard_count(total));
    for_each_shard(total, [&](std::size_t s, std::size_t begin, std::size_t end) {
      for (std::size_t cuts = begin; cuts < end; ++cuts) {
        const auto mp = MonotonePartition::from_cuts(cuts, n);
        shards[s].offer(partition_value(prior, v, mp), to_set_partition(mp), tie_tol);
      }
    });
  } else {
    shards.resize(1);
    enumerate_partitions(n, kind, [&](const SetPartition& p) {
      shards[0].offer(set_partition_value(prior, v, p), p, tie_tol);
    });
  }

  BruteForceResult result;
  result.value = -INFINITY;
  for (const ShardBest& s : shards) {
    result.value = std::max(result.value, s.value);
    result.evaluated += s.evaluated;
  }
  for (const ShardBest& s : shards)
    for (const auto& [value, p] : s.near)
      if (value >= result.value - tie_tol) result.best.push_back(p);
  return result;
}

std::string_view to_string(GridFamily family) {
  switch (family) {
    case GridFamily::interval_disclosure: return "interval_disclosure";
    case GridFamily::bipooling_pairs: return "bipooling_pairs";
    case GridFamily::stochastic_uc_z: return "stochastic_uc_z";
  }
  return "interval_disclosure";
}

namespace {

struct GridBest {
  double value = -INFINITY;
  std::vector<double> params;
};

// Row-sharded maximization of value(i, j) over 0 <= i <= j < k (i < j when
// strict). The first maximum in row-major order wins.
GridBest search_pairs(int k, bool strict, const std::function<double(int, int)>& value,
                      const std::vector<double>& xs) {
  const auto rows = static_cast<std::size_t>(k);
  std::vector<GridBest> shards(shard_count(rows));
  for_each_shard(rows, [&](std::size_t s, std::size_t begin, std::size_t end) {
    GridBest& best = shards[s];
    for (std::size_t i = begin; i < end; ++i) {
      for (int j = static_cast<int>(i) + (strict ? 1 : 0); j < k; ++j) {
        const double val = value(static_cast<int>(i), j);
        if (val > best.value) best = {val, {xs[i], xs[static_cast<std::size_t>(j)]}};
      }
    }
  });
  GridBest best;
  for (const GridBest& s : shards)
    if (s.value > best.value) best = s;
  return best;
}

}  // namespace

GridResult grid_search_continuous(const Prior& prior, const ObjectiveFn& v, int k, GridFamily family) {
  if (k < 100) throw InvalidArgument("oracle.invalid", "grid search needs K >= 100");
  GridResult result;
  result.family = family;

  if (family == GridFamily::stochastic_uc_z) {
    const auto* d = std::get_if<DiscretePrior>(&prior);
    if (!d) throw InvalidArgument("oracle.invalid", "stochastic_uc_z needs a discrete prior");
    const UcWalk walk(*d, v);
    const double lo = d->support().front();
    const double hi = d->support().back();
    result.value = -INFINITY;
    for (int i = 0; i < k; ++i) {
      const double z = std::min(hi, lo + (hi - lo) * i / (k - 1));
      const UcPoint pt = walk.at(z);
      if (pt.value > result.value) {
        result.value = pt.value;
        result.params = {z, static_cast<double>(pt.j), pt.q};
      }
    }
    return result;
  }

  const auto* c = std::get_if<ContinuousPrior>(&prior);
  if (!c) throw InvalidArgument("oracle.invalid", "continuous grid families need a continuous prior");
  const auto n = static_cast<std::size_t>(k);
  std::vector<double> xs(n), cdf(n), moment(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = static_cast<double>(i) / (k - 1);
    cdf[i] = c->cdf(xs[i]);
    moment[i] = c->partial_mean(xs[i]);
  }

  GridBest best;
  if (family == GridFamily::interval_disclosure) {
    std::vector<double> low(n, 0.0), high(n, 0.0), inner(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (xs[i] > 0.0) low[i] = c->mass(0.0, xs[i]) * v.eval(c->conditional_mean(0.0, xs[i]));
      if (xs[i] < 1.0) high[i] = c->mass(xs[i], 1.0) * v.eval(c->conditional_mean(xs[i], 1.0));
      inner[i] = c->integrate(v, 0.0, xs[i]);
    }
    best = search_pairs(k, false, [&](int i, int j) {
      const auto a = static_cast<std::size_t>(i);
      const auto b = static_cast<std::size_t>(j);
      return low[a] + (inner[b] - inner[a]) + high[b];
    }, xs);
  } else {
    const double mean = c->mean();
    best = search_pairs(k, true, [&](int i, int j) {
      const auto a = static_cast<std::size_t>(i);
      const auto b = static_cast<std::size_t>(j);
      const double mid = cdf[b] - cdf[a];
      if (!(mid > 0.0)) return -HUGE_VAL;
      const double mid_moment = moment[b] - moment[a];
      double val = mid * v.eval(std::clamp(mid_moment / mid, xs[a], xs[b]));
      const double outer = 1.0 - mid;
      if (outer > 1e-15) val += outer * v.eval(std::clamp((mean - mid_moment) / outer, 0.0, 1.0));
      return val;
    }, xs);
  }
  result.value = best.value;
  result.params = best.params;
  return result;
}

}  // namespace mpersuade
