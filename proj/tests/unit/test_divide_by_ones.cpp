#include <gtest/gtest.h>

#include <bit>
#include <sstream>

#include "ovi/divide_by_ones.hpp"
#include "ovi/instance_gen.hpp"
#include "ovi/serialize.hpp"
#include "test_support.hpp"

using namespace ovi;
using namespace ovi::testing;

namespace {

ParamSet dbo_params(unsigned d, unsigned part_bits, unsigned c1_bits, std::uint64_t tau_entry) {
  ParamSet p;
  p.profile = Profile::dbo;
  p.d = d;
  p.part_bits = part_bits;
  p.c1_bits = c1_bits;
  p.tau_entry = tau_entry;
  return p;
}

}  // namespace

TEST(Layout, Divisible) {
  const auto l = layout_parts(24, 12, LayoutMode::divisible);
  ASSERT_EQ(l.size(), 1u);
  ASSERT_EQ(l[0].parts.size(), 2u);
  EXPECT_EQ(l[0].parts[0].bits(), 0xFFFu);
  EXPECT_EQ(l[0].parts[1].bits(), 0xFFF000u);
  EXPECT_EQ(l[0].ignored.size(), 0u);

  const auto single = layout_parts(10, 10, LayoutMode::divisible);
  EXPECT_EQ(single[0].parts.size(), 1u);
  EXPECT_EQ(single[0].parts[0].bits(), low_mask(10));

  const auto leftover = layout_parts(14, 4, LayoutMode::divisible);
  EXPECT_EQ(leftover[0].parts.size(), 3u);
  EXPECT_EQ(leftover[0].ignored.bits(), 0b11u << 12);
  EXPECT_LT(leftover[0].ignored.size(), 4u);
}

TEST(Layout, EpsilonBlocks) {
  const auto l = layout_parts(18, 12, LayoutMode::epsilon_blocks, 6);
  ASSERT_EQ(l.size(), 3u);  // C(3, 2)
  EXPECT_EQ(l[0].parts[0].bits(), 0xFFFu);
  EXPECT_EQ(l[1].parts[0].bits(), 0x3F03Fu);
  EXPECT_EQ(l[2].parts[0].bits(), 0x3FFC0u);
  EXPECT_THROW(layout_parts(40, 20, LayoutMode::epsilon_blocks, 1, 4096), CapacityError);
  EXPECT_THROW(layout_parts(10, 11, LayoutMode::divisible), ContractError);
}

TEST(Dbo, HandTracedDesignation) {
  const Instance inst(12, {0xF00, 0x00F, 0x0F0, 0xFFF});
  const DboIndex idx = DboIndex::build(inst, dbo_params(12, 4, 0, 1000));
  EXPECT_EQ(idx.designated()[0], 2u);
  EXPECT_EQ(idx.designated()[1], 0u);
  EXPECT_EQ(idx.designated()[2], 1u);
  EXPECT_EQ(idx.designated()[3], 0u);  // ties go to the lowest part
  EXPECT_EQ(idx.entries_per_vector()[0], 1u);
  ASSERT_EQ(idx.array(2).key_count(), 1u);
  EXPECT_EQ(idx.array(2).key_at(0), 0u);
  EXPECT_EQ(idx.array(2).find(0)[0], 0u);
}

TEST(Dbo, ZeroVectorGoesToS1) {
  const Instance inst(8, {0, 0xFF});
  const DboIndex idx = DboIndex::build(inst, dbo_params(8, 4, 0, 1000));
  ASSERT_EQ(idx.s1().size(), 1u);
  EXPECT_EQ(idx.s1()[0], 0u);
  EXPECT_TRUE(idx.query(BitVec(0xFF, 8)));
}

TEST(Dbo, DuplicationLawAndDesignationGuarantee) {
  const unsigned d = 16;
  const Instance inst = gen_random(100, d, 3);
  const DboIndex idx = DboIndex::build(inst, dbo_params(d, 4, 3, 1u << 30));
  std::uint64_t total = 0;
  std::size_t s1 = 0;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const std::uint64_t v = inst.values()[i];
    const unsigned w = static_cast<unsigned>(std::popcount(v));
    if (w <= 3) {
      ++s1;
      ASSERT_EQ(idx.designated()[i], DboIndex::kInS1);
      continue;
    }
    // best part by direct count, ties to lowest
    unsigned best = 0, best_ones = 0;
    for (unsigned j = 0; j < 4; ++j) {
      const unsigned ones = static_cast<unsigned>(std::popcount((v >> (4 * j)) & 0xF));
      if (ones > best_ones) {
        best_ones = ones;
        best = j;
      }
    }
    ASSERT_EQ(idx.designated()[i], best);
    ASSERT_EQ(idx.entries_per_vector()[i], std::uint64_t{1} << (4 - best_ones));
    ASSERT_GE(best_ones * 4, w);  // at least ceil(w / parts)
    total += std::uint64_t{1} << (4 - best_ones);
    std::size_t appearances = 0;
    for (unsigned j = 0; j < 4; ++j) {
      const auto& arr = idx.array(j);
      for (std::size_t p = 0; p < arr.key_count(); ++p) {
        const auto l = arr.list_at(p);
        appearances += static_cast<std::size_t>(std::count(l.begin(), l.end(), static_cast<std::uint32_t>(i)));
      }
    }
    ASSERT_EQ(appearances, std::size_t{1} << (4 - best_ones));
  }
  EXPECT_EQ(idx.elements_before_pruning(), total);
  EXPECT_EQ(idx.s1().size(), s1);
  std::uint64_t bound = 0;
  for (unsigned j = 0; j <= 3; ++j) bound += choose(d, j);
  EXPECT_LE(idx.s1().size(), bound);
}

TEST(Dbo, OracleEquivalenceWithPlannedParams) {
  const unsigned d = 16;
  const Instance inst = gen_random(256, d, 42);
  const DboIndex idx = DboIndex::build(inst, plan_params(256, d, Profile::dbo));
  const auto vals = to_vector(inst);
  for (std::uint64_t q = 0; q < (1u << d); ++q) {
    ASSERT_EQ(idx.query(BitVec(q, d)), exists_orthogonal(vals, q, d)) << q;
  }
}

TEST(Dbo, EveryEntryBitmapped) {
  const unsigned d = 12;
  const Instance inst = gen_random(64, d, 9);
  ParamSet p = plan_params(64, d, Profile::dbo);
  p.tau_entry = 1;
  const DboIndex idx = DboIndex::build(inst, p);
  const auto vals = to_vector(inst);
  for (std::size_t j = 0; j < idx.parts().size(); ++j) EXPECT_EQ(idx.array(j).element_count(), 0u);
  std::size_t one_probe = 0;
  for (std::uint64_t q = 0; q < (1u << d); ++q) {
    QueryStats st;
    ASSERT_EQ(idx.query(BitVec(q, d), &st), exists_orthogonal(vals, q, d));
    if (st.bitmap_lookups == 1 && st.list_elements_scanned == 0) ++one_probe;
  }
  // Queries whose entry in some part is non-empty are single probes.
  EXPECT_GT(one_probe, 0u);
}

TEST(Dbo, EpsilonLayoutOracle) {
  const unsigned d = 18;
  const Instance inst = gen_random(200, d, 6);
  ParamSet p = dbo_params(d, 12, 2, 1u << 30);
  p.eps_bits = 6;
  const DboIndex idx = DboIndex::build(inst, p);
  EXPECT_EQ(idx.parts().size(), 3u);
  const auto vals = to_vector(inst);
  for (std::uint64_t q : random_queries(d, 5000, 1)) {
    ASSERT_EQ(idx.query(BitVec(q, d)), exists_orthogonal(vals, q, d));
  }
}

TEST(Dbo, SerializationRoundTrip) {
  const unsigned d = 14;
  const Instance inst = gen_random(128, d, 8);
  ParamSet p = plan_params(128, d, Profile::dbo);
  p.tau_entry = 8;
  const DboIndex idx = DboIndex::build(inst, p);
  std::stringstream ss;
  BinaryWriter w(ss);
  idx.save_payload(w);
  BinaryReader r(ss);
  const DboIndex back = DboIndex::load_payload(r);
  EXPECT_EQ(back.structure().total_bits(), idx.structure().total_bits());
  for (std::uint64_t q = 0; q < (1u << d); ++q) ASSERT_EQ(back.query(BitVec(q, d)), idx.query(BitVec(q, d)));
}

TEST(Dbo, BudgetRefusal) {
  const Instance inst = gen_random(256, 16, 1);
  ParamSet p = plan_params(256, 16, Profile::dbo);
  p.budget_bits = 1000;
  EXPECT_THROW(DboIndex::build(inst, p), CapacityError);
}
