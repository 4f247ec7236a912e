#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ovi/instance_gen.hpp"
#include "ovi/query_graph.hpp"
#include "test_support.hpp"

using namespace ovi;
using namespace ovi::testing;

namespace {

template <class Range>
std::vector<std::uint64_t> collect(const Range& r) {
  return {r.begin(), r.end()};
}

}  // namespace

TEST(Submasks, SmallCases) {
  EXPECT_EQ(collect(enum_submasks(0b101)), (std::vector<std::uint64_t>{0b101, 0b100, 0b001, 0b000}));
  EXPECT_EQ(collect(enum_submasks(0)), (std::vector<std::uint64_t>{0}));
}

TEST(Submasks, CountAndDistinctness) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t mask = rng() & low_mask(14);
    std::set<std::uint64_t> seen;
    for (std::uint64_t r : enum_submasks(mask)) {
      ASSERT_EQ(r & ~mask, 0u);
      ASSERT_TRUE(seen.insert(r).second);
    }
    ASSERT_EQ(seen.size(), std::size_t{1} << std::popcount(mask));
  }
}

TEST(Supersets, SmallCases) {
  EXPECT_EQ(collect(enum_supersets_at_weight(0b001, 2, 3)), (std::vector<std::uint64_t>{0b011, 0b101}));
  EXPECT_EQ(collect(enum_supersets_at_weight(0b110, 2, 3)), (std::vector<std::uint64_t>{0b110}));
  EXPECT_EQ(collect(enum_supersets_at_weight(0, 0, 5)), (std::vector<std::uint64_t>{0}));
  EXPECT_THROW(enum_supersets_at_weight(0b111, 2, 3), ContractError);
  EXPECT_THROW(enum_supersets_at_weight(0b1000, 2, 3), ContractError);
}

TEST(Supersets, CountMatchesBinomialExhaustively) {
  const unsigned w = 9;
  for (std::uint64_t base = 0; base < (1u << w); base += 7) {
    const unsigned have = static_cast<unsigned>(std::popcount(base));
    for (unsigned t = have; t <= w; ++t) {
      std::set<std::uint64_t> seen;
      for (std::uint64_t a : enum_supersets_at_weight(base, t, w)) {
        ASSERT_EQ(a & base, base);
        ASSERT_EQ(static_cast<unsigned>(std::popcount(a)), t);
        ASSERT_EQ(a >> w, 0u);
        ASSERT_TRUE(seen.insert(a).second);
      }
      ASSERT_EQ(seen.size(), choose(w - have, t - have));
    }
  }
}

TEST(ListMap, HandExample) {
  const Instance inst(4, {0x1, 0x2, 0xC, 0x6});
  const ListMap lm = build_list_map(inst, CoordSet(0b0011, 4));
  EXPECT_EQ(lm.lists.key_count(), 3u);
  EXPECT_EQ(collect(lm.lists.find(1)), (std::vector<std::uint64_t>{0}));
  EXPECT_EQ(collect(lm.lists.find(2)), (std::vector<std::uint64_t>{1, 3}));
  EXPECT_EQ(collect(lm.lists.find(0)), (std::vector<std::uint64_t>{2}));
  EXPECT_EQ(lm.node_of(1), 2u);
}

TEST(ListMap, EmptyWIsOneList) {
  const Instance inst = gen_random(50, 10, 2);
  const ListMap lm = build_list_map(inst, CoordSet(0, 10));
  EXPECT_EQ(lm.lists.key_count(), 1u);
  EXPECT_EQ(lm.lists.find(0).size(), 50u);
}

TEST(ListMap, ReachabilityIsADisjointUnion) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 6; ++t) {
    const unsigned d = 16;
    const Instance inst = gen_random(300, d, 10 + t);
    const CoordSet w(rng() & low_mask(d), d);
    if (w.size() > 12) continue;
    const ListMap lm = build_list_map(inst, w);
    ASSERT_EQ(lm.lists.element_count(), inst.n());
    ASSERT_LE(lm.lists.key_count(), std::min<std::size_t>(inst.n(), std::size_t{1} << w.size()));
    for (std::uint64_t beta = 0; beta < (std::uint64_t{1} << w.size()); beta += 3) {
      std::vector<std::uint32_t> got;
      for (std::uint64_t r : enum_submasks(~beta & low_mask(w.size()))) {
        for (std::uint32_t i : lm.lists.find(r)) got.push_back(i);
      }
      std::sort(got.begin(), got.end());
      ASSERT_TRUE(std::adjacent_find(got.begin(), got.end()) == got.end());
      std::vector<std::uint32_t> want;
      for (std::size_t i = 0; i < inst.n(); ++i) {
        if ((extract_bits(inst.values()[i], w.bits()) & beta) == 0) want.push_back(static_cast<std::uint32_t>(i));
      }
      ASSERT_EQ(got, want);
    }
  }
}
