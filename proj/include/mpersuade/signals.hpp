#pragma once

// Signal representations shared by the solvers: consecutive-block partitions
// of a discrete support, pooling sets over [0,1], and stochastic upper
// censorship.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mpersuade {

// Inclusive index range [first, last] of the support.
struct Block {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last - first + 1; }
  auto operator<=>(const Block&) const = default;
};

// A monotone (deterministic, increasing) signal on a discrete support of n
// states: consecutive, disjoint, exhaustive blocks in increasing order.
class MonotonePartition {
public:
  // Throws MalformedSignal unless the blocks tile 0..n-1 in order.
  static MonotonePartition from_blocks(std::vector<Block> blocks, std::size_t n);
  // Bit i of cuts set <=> states i and i+1 are in different blocks.
  static MonotonePartition from_cuts(std::uint64_t cuts, std::size_t n);
  static MonotonePartition full_disclosure(std::size_t n);
  static MonotonePartition no_disclosure(std::size_t n);
  // Separates states 0..pool_start-1 and pools pool_start..n-1.
  static MonotonePartition upper_censorship(std::size_t n, std::size_t pool_start);

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t states() const { return n_; }

  // At most one non-singleton block, and it is the last one.
  bool is_upper_censorship() const;
  // First index of the terminal block (the pooled tail of an upper-censorship
  // partition).
  std::size_t pool_start() const { return blocks_.back().first; }

  bool operator==(const MonotonePartition&) const = default;

private:
  MonotonePartition(std::vector<Block> blocks, std::size_t n) : blocks_(std::move(blocks)), n_(n) {}

  std::vector<Block> blocks_;
  std::size_t n_ = 0;
};

// Orders partitions by number of blocks (fewer separated states first), then
// lexicographically by block boundaries.
bool coarser_first(const MonotonePartition& a, const MonotonePartition& b);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const Interval&) const = default;
};

// Monotone signal on a continuous state: states inside each interval are
// pooled, all others separated. Since the prior is atomless, interval
// endpoints carry no mass and openness is immaterial.
class PoolingSet {
public:
  // Throws MalformedSignal unless 0 <= lo < hi <= 1 and intervals are
  // increasing and pairwise disjoint (touching endpoints are allowed).
  static PoolingSet create(std::vector<Interval> intervals);
  static PoolingSet full_disclosure() { return PoolingSet({}); }
  static PoolingSet no_disclosure() { return PoolingSet({{0.0, 1.0}}); }

  const std::vector<Interval>& intervals() const { return intervals_; }
  // Complement of the pooling intervals in [0,1], dropping empty pieces.
  std::vector<Interval> separated() const;

private:
  explicit PoolingSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {}

  std::vector<Interval> intervals_;
};

// How a stochastic upper censorship optimum satisfies its first-order
// condition V(m*) + V'(m*)(w* - m*) >= V(w*).
enum class UcRegime {
  no_disclosure,  // boundary (w_1, 0): weak inequality
  tangency,       // equality
  knot,           // optimum sits at a support point where the tangent gap jumps
                  // from positive to negative: weak inequality
};

// States below the cutoff are separated, states above pooled; the cutoff
// state is separated with probability q and pooled otherwise.
struct StochasticUpperCensorship {
  std::size_t cutoff_index = 0;
  double cutoff_state = 0.0;
  double q = 0.0;
  double pooled_mean = 0.0;
  double value = 0.0;
  // V(m*) + V'(m*)(w* - m*) - V(w*) = -Delta(w*, m*).
  double tangency_residual = 0.0;
  UcRegime regime = UcRegime::tangency;
};

}  // namespace mpersuade
