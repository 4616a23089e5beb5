#include "mpersuade/signals.hpp"

#include <algorithm>
#include <string>

#include "mpersuade/errors.hpp"

namespace mpersuade {

MonotonePartition MonotonePartition::from_blocks(std::vector<Block> blocks, std::size_t n) {
  if (n == 0) throw MalformedSignal("a partition needs at least one state");
  std::size_t next = 0;
  for (const Block& b : blocks) {
    if (b.first != next || b.last < b.first || b.last >= n)
      throw MalformedSignal("blocks must be consecutive index ranges covering 0.." +
                            std::to_string(n - 1) + " in order");
    next = b.last + 1;
  }
  if (next != n) throw MalformedSignal("blocks do not cover every state");
  return MonotonePartition(std::move(blocks), n);
}

MonotonePartition MonotonePartition::from_cuts(std::uint64_t cuts, std::size_t n) {
  if (n == 0 || n > 64) throw MalformedSignal("from_cuts supports 1..64 states");
  std::vector<Block> blocks;
  std::size_t first = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (cuts >> i & 1U) {
      blocks.push_back({first, i});
      first = i + 1;
    }
  }
  blocks.push_back({first, n - 1});
  return MonotonePartition(std::move(blocks), n);
}

MonotonePartition MonotonePartition::full_disclosure(std::size_t n) {
  if (n == 0) throw MalformedSignal("a partition needs at least one state");
  std::vector<Block> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[i] = {i, i};
  return MonotonePartition(std::move(blocks), n);
}

MonotonePartition MonotonePartition::no_disclosure(std::size_t n) {
  if (n == 0) throw MalformedSignal("a partition needs at least one state");
  return MonotonePartition({{0, n - 1}}, n);
}

MonotonePartition MonotonePartition::upper_censorship(std::size_t n, std::size_t pool_start) {
  if (n == 0 || pool_start >= n) throw MalformedSignal("pool_start must index a state");
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < pool_start; ++i) blocks.push_back({i, i});
  blocks.push_back({pool_start, n - 1});
  return MonotonePartition(std::move(blocks), n);
}

bool MonotonePartition::is_upper_censorship() const {
  for (std::size_t b = 0; b + 1 < blocks_.size(); ++b)
    if (blocks_[b].size() != 1) return false;
  return true;
}

bool coarser_first(const MonotonePartition& a, const MonotonePartition& b) {
  if (a.blocks().size() != b.blocks().size()) return a.blocks().size() < b.blocks().size();
  return a.blocks() < b.blocks();
}

PoolingSet PoolingSet::create(std::vector<Interval> intervals) {
  double prev_hi = 0.0;
  for (const Interval& iv : intervals) {
    if (!(iv.lo >= 0.0 && iv.lo < iv.hi && iv.hi <= 1.0))
      throw MalformedSignal("pooling intervals need 0 <= lo < hi <= 1");
    if (iv.lo < prev_hi) throw MalformedSignal("pooling intervals overlap or are out of order");
    prev_hi = iv.hi;
  }
  return PoolingSet(std::move(intervals));
}

std::vector<Interval> PoolingSet::separated() const {
  std::vector<Interval> out;
  double cursor = 0.0;
  for (const Interval& iv : intervals_) {
    if (iv.lo > cursor) out.push_back({cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < 1.0) out.push_back({cursor, 1.0});
  return out;
}

}  // namespace mpersuade
