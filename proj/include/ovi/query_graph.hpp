#pragma once

#include <bit>
#include <cstdint>
#include <iterator>

#include "ovi/bitvec.hpp"
#include "ovi/flat_list_map.hpp"
#include "ovi/instance.hpp"

namespace ovi {

/// Every r with r AND ~mask = 0, in decreasing order from mask down to 0.
/// Reachability in the query graph from node beta is exactly the submasks
/// of complement(beta).
class SubmaskRange {
 public:
  explicit constexpr SubmaskRange(std::uint64_t mask) noexcept : mask_(mask) {}

  class iterator {
   public:
    using value_type = std::uint64_t;
    using difference_type = std::ptrdiff_t;

    constexpr iterator() = default;
    constexpr iterator(std::uint64_t mask, std::uint64_t cur, bool done) noexcept
        : mask_(mask), cur_(cur), done_(done) {}

    constexpr std::uint64_t operator*() const noexcept { return cur_; }
    constexpr iterator& operator++() noexcept {
      if (cur_ == 0) {
        done_ = true;
      } else {
        cur_ = (cur_ - 1) & mask_;
      }
      return *this;
    }
    constexpr iterator operator++(int) noexcept {
      auto t = *this;
      ++*this;
      return t;
    }
    friend constexpr bool operator==(const iterator& a, const iterator& b) noexcept {
      return a.done_ == b.done_ && (a.done_ || a.cur_ == b.cur_);
    }

   private:
    std::uint64_t mask_ = 0;
    std::uint64_t cur_ = 0;
    bool done_ = true;
  };

  constexpr iterator begin() const noexcept { return {mask_, mask_, false}; }
  constexpr iterator end() const noexcept { return {mask_, 0, true}; }

 private:
  std::uint64_t mask_;
};

constexpr SubmaskRange enum_submasks(std::uint64_t mask) noexcept { return SubmaskRange(mask); }

/// Every alpha within the low w_bits with alpha ⊇ base and
/// popcount(alpha) = target_weight, each exactly once.
class SupersetRange {
 public:
  SupersetRange(std::uint64_t base, unsigned target_weight, unsigned w_bits);

  class iterator {
   public:
    using value_type = std::uint64_t;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(const SupersetRange* owner, std::uint64_t comb, bool done) noexcept
        : owner_(owner), comb_(comb), done_(done) {}

    std::uint64_t operator*() const noexcept {
      return owner_->base_ | deposit_bits(comb_, owner_->free_);
    }
    iterator& operator++() noexcept;
    iterator operator++(int) noexcept {
      auto t = *this;
      ++*this;
      return t;
    }
    friend bool operator==(const iterator& a, const iterator& b) noexcept {
      return a.done_ == b.done_ && (a.done_ || a.comb_ == b.comb_);
    }

   private:
    const SupersetRange* owner_ = nullptr;
    std::uint64_t comb_ = 0;  // choose-t pattern over the free positions
    bool done_ = true;
  };

  iterator begin() const noexcept { return {this, first_, empty_}; }
  iterator end() const noexcept { return {this, 0, true}; }

 private:
  std::uint64_t base_;
  std::uint64_t free_;
  unsigned free_count_;
  std::uint64_t first_ = 0;
  bool empty_ = false;
};

inline SupersetRange enum_supersets_at_weight(std::uint64_t base, unsigned target_weight,
                                              unsigned w_bits) {
  return SupersetRange(base, target_weight, w_bits);
}

/// The query-graph lists: input indices partitioned by their restriction to
/// W. The list with key r sits at node alpha = complement of r within W.
struct ListMap {
  CoordSet w;
  FlatListMap lists;

  unsigned w_bits() const noexcept { return w.size(); }
  std::uint64_t node_of(std::uint64_t key) const noexcept { return ~key & low_mask(w_bits()); }
};

ListMap build_list_map(const Instance& inst, const CoordSet& w);

}  // namespace ovi
