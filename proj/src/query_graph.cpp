#include "ovi/query_graph.hpp"

namespace ovi {

SupersetRange::SupersetRange(std::uint64_t base, unsigned target_weight, unsigned w_bits)
    : base_(base), free_(~base & low_mask(w_bits)), free_count_(static_cast<unsigned>(std::popcount(free_))) {
  if (base & ~low_mask(w_bits)) throw ContractError("superset base wider than w_bits");
  const unsigned have = static_cast<unsigned>(std::popcount(base));
  if (target_weight < have || target_weight > w_bits) {
    throw ContractError("superset target weight out of range");
  }
  first_ = low_mask(target_weight - have);
}

SupersetRange::iterator& SupersetRange::iterator::operator++() noexcept {
  const std::uint64_t limit = owner_->free_count_ >= 64 ? 0 : std::uint64_t{1} << owner_->free_count_;
  if (comb_ == 0) {
    done_ = true;
    return *this;
  }
  // Gosper's hack: next integer with the same popcount.
  const std::uint64_t low = comb_ & (~comb_ + 1);
  const std::uint64_t ripple = comb_ + low;
  if (ripple == 0) {
    done_ = true;
    return *this;
  }
  const std::uint64_t next = (((ripple ^ comb_) >> 2) / low) | ripple;
  if (limit != 0 && next >= limit) {
    done_ = true;
  } else {
    comb_ = next;
  }
  return *this;
}

ListMap build_list_map(const Instance& inst, const CoordSet& w) {
  require_same_width(inst.d(), w.width());
  std::vector<FlatListMap::Entry> pairs;
  pairs.reserve(inst.n());
  const auto vals = inst.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    pairs.emplace_back(extract_bits(vals[i], w.bits()), static_cast<std::uint32_t>(i));
  }
  return ListMap{w, FlatListMap::from_pairs(std::move(pairs))};
}

}  // namespace ovi
