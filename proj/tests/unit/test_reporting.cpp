#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "ovi/instance_gen.hpp"
#include "ovi/reporting.hpp"
#include "ovi/serialize.hpp"
#include "qg_params.hpp"
#include "test_support.hpp"

using namespace ovi;
using namespace ovi::testing;

namespace {

// Direct predicate for a tree bit.
bool tree_bit_oracle(const std::vector<std::uint64_t>& u, unsigned level, std::uint64_t p, std::uint64_t s) {
  for (std::uint64_t v : u) {
    if ((v & low_mask(level)) == p && ((v >> level) & s) == 0) return true;
  }
  return false;
}

std::size_t distinct_leaves(const std::vector<std::uint64_t>& vals, const std::vector<std::uint32_t>& ids) {
  std::set<std::uint64_t> s;
  for (auto i : ids) s.insert(vals[i]);
  return s.size();
}

}  // namespace

TEST(OrthTree, HandExamples) {
  const std::vector<std::uint64_t> u{0b01, 0b10};
  const OrthTree t = build_orth_tree(u, 2);
  EXPECT_FALSE(t.bit(0, 0, 0b11));
  EXPECT_TRUE(t.bit(0, 0, 0b01));
  EXPECT_TRUE(t.bit(0, 0, 0b00));

  const std::vector<std::uint64_t> zero{0};
  const OrthTree z = build_orth_tree(zero, 3);
  for (unsigned i = 0; i <= 3; ++i) {
    for (std::uint64_t p = 0; p < (1u << i); ++p) {
      for (std::uint64_t s = 0; s < (1u << (3 - i)); ++s) EXPECT_EQ(z.bit(i, p, s), p == 0);
    }
  }
  // Only the all-zero prefix exists; its bits are all set.
  for (std::uint64_t s = 0; s < 8; ++s) EXPECT_TRUE(z.bit(0, 0, s));
}

TEST(OrthTree, EveryBitMatchesPredicate) {
  const unsigned m = 8;
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<std::uint64_t> u(20);
    for (auto& v : u) v = rng() & low_mask(m);
    const OrthTree t = build_orth_tree(u, m);
    for (unsigned i = 0; i <= m; ++i) {
      for (std::uint64_t p = 0; p < (1u << i); ++p) {
        for (std::uint64_t s = 0; s < (1u << (m - i)); ++s) {
          const bool b = t.bit(i, p, s);
          ASSERT_EQ(b, tree_bit_oracle(u, i, p, s));
          if (b && i < m) {
            const bool s0 = s & 1;
            const bool c0 = t.bit(i + 1, p, s >> 1);
            const bool c1 = !s0 && t.bit(i + 1, p | (std::uint64_t{1} << i), s >> 1);
            ASSERT_TRUE(c0 || c1);
          }
        }
      }
    }
  }
}

TEST(OrthTree, RootEqualsLookup) {
  const Instance inst = gen_random(64, 12, 4);
  const OrthTree t = build_orth_tree(inst);
  const OrthBitmap lookup = build_lookup(inst);
  EXPECT_EQ(t.level_words(0), lookup.words());
}

TEST(ReportTree, HandExample) {
  const Instance inst(4, {0x1, 0x2, 0xC, 0x6});
  const OrthTree t = build_orth_tree(inst);
  EXPECT_EQ(report_tree(t, BitVec(0x9, 4)), (std::vector<std::uint32_t>{1, 3}));
  const CompressedOrthDAG dag = compress_tree(t);
  EXPECT_EQ(report_compressed(dag, BitVec(0x9, 4)), (std::vector<std::uint32_t>{1, 3}));
}

TEST(ReportTree, EmptyRootReadsOneBit) {
  const Instance inst(2, {0b01, 0b10});
  const OrthTree t = build_orth_tree(inst);
  QueryStats st;
  EXPECT_TRUE(report_tree(t, BitVec(0b11, 2), &st).empty());
  EXPECT_EQ(st.nodes_visited, 1u);
  const CompressedOrthDAG dag = compress_tree(t);
  QueryStats st2;
  EXPECT_TRUE(report_compressed(dag, BitVec(0b11, 2), &st2).empty());
  EXPECT_EQ(st2.nodes_visited, 0u);
}

TEST(ReportTree, FullReportAtZero) {
  const Instance inst = gen_random(40, 10, 5);
  std::set<std::uint64_t> distinct(inst.values().begin(), inst.values().end());
  const OrthTree t = build_orth_tree(inst);
  QueryStats st;
  const auto all = report_tree(t, BitVec(0, 10), &st);
  EXPECT_EQ(all.size(), 40u);
  EXPECT_LE(st.nodes_visited, 2 * distinct.size() * 10 + 1);
}

TEST(Compress, ChainAndBranchExamples) {
  {
    const std::vector<std::uint64_t> u{0b00};
    const CompressedOrthDAG dag = compress_tree(build_orth_tree(u, 2));
    ASSERT_TRUE(dag.root().test(0b11));
    const auto e = dag.entry(0b11);
    EXPECT_TRUE(dag.is_leaf(e));
    EXPECT_EQ(dag.leaf_value(e), 0u);
  }
  {
    const std::vector<std::uint64_t> u{0b01, 0b10};
    const CompressedOrthDAG dag = compress_tree(build_orth_tree(u, 2));
    ASSERT_TRUE(dag.root().test(0));
    const auto e = dag.entry(0);
    ASSERT_FALSE(dag.is_leaf(e));
    EXPECT_NE(dag.left(e), dag.right(e));
    EXPECT_EQ(dag.node_count(), 3u);
    EXPECT_EQ(dag.edge_count(), 2u);
  }
}

TEST(Compress, SizeBoundsAndEquivalence) {
  for (unsigned m : {6u, 9u, 12u}) {
    const Instance inst = gen_random(48, m, 40 + m);
    const auto vals = to_vector(inst);
    const OrthTree t = build_orth_tree(inst);
    const CompressedOrthDAG dag = compress_tree(t);
    EXPECT_LE(dag.node_count(), t.count_ones());
    EXPECT_LE(dag.edge_count(), 2 * dag.node_count());
    for (std::uint32_t v = 0; v < dag.node_count(); ++v) {
      if (dag.is_leaf(v)) continue;
      ASSERT_LT(dag.left(v), v);
      ASSERT_LT(dag.right(v), v);
    }
    for (std::uint64_t q = 0; q < (1u << m); ++q) {
      QueryStats a, b;
      const auto want = all_orthogonal(vals, q, m);
      ASSERT_EQ(report_tree(t, q, &a), want);
      ASSERT_EQ(report_compressed(dag, q, &b), want);
      const std::size_t tl = distinct_leaves(vals, want);
      ASSERT_LE(a.nodes_visited, 2 * tl * m + 1);
      ASSERT_LE(b.nodes_visited, 2 * tl + 1);
    }
  }
}

TEST(Compress, DuplicatesShareALeaf) {
  const Instance inst(4, {0x3, 0x3, 0x3, 0x8});
  const CompressedOrthDAG dag = compress_tree(build_orth_tree(inst));
  QueryStats st;
  EXPECT_EQ(report_compressed(dag, BitVec(0x4, 4), &st), (std::vector<std::uint32_t>{0, 1, 2, 3}));
  EXPECT_LE(st.nodes_visited, 3u);
  EXPECT_EQ(report_compressed(dag, BitVec(0x1, 4)), (std::vector<std::uint32_t>{3}));
}

TEST(Compress, SerializationRoundTrip) {
  const Instance inst = gen_random(30, 10, 6);
  const CompressedOrthDAG dag = compress_tree(build_orth_tree(inst));
  std::stringstream ss;
  BinaryWriter w(ss);
  dag.save(w);
  BinaryReader r(ss);
  const CompressedOrthDAG back = CompressedOrthDAG::load(r);
  EXPECT_EQ(back.node_count(), dag.node_count());
  for (std::uint64_t q = 0; q < 1024; ++q) ASSERT_EQ(report_compressed(back, q), report_compressed(dag, q));
}

TEST(TlqgReport, ExhaustiveOracle) {
  const unsigned d = 14;
  const Instance inst = gen_random(128, d, 7);
  const TlqgReporter idx = TlqgReporter::build(inst, qg_params(Profile::tlqg, 128, d, 6, 2, 4));
  EXPECT_FALSE(idx.long_lists().empty());
  EXPECT_EQ(idx.lists().element_count(), 128u);
  const auto vals = to_vector(inst);
  for (std::uint64_t q = 0; q < (1u << d); ++q) {
    const auto want = all_orthogonal(vals, q, d);
    ASSERT_EQ(report_tlqg(idx, BitVec(q, d)), want) << q;
    ASSERT_EQ(idx.query(BitVec(q, d)), !want.empty());
  }
}

TEST(TlqgReport, EmptyLightQueryIsCheap) {
  const unsigned d = 12;
  const Instance inst(d, {0xFFF, 0xFFE, 0x7FF});
  const TlqgReporter idx = TlqgReporter::build(inst, qg_params(Profile::tlqg, 16, d, 6, 2, 4));
  QueryStats st;
  EXPECT_TRUE(idx.report(BitVec(0x801, d), &st).empty());
  EXPECT_LE(st.nodes_visited, 1u);
}

TEST(TlqgReport, HeavyPathPartsAreDisjoint) {
  const unsigned d = 14;
  const Instance inst = gen_random(128, d, 8);
  const TlqgReporter idx = TlqgReporter::build(inst, qg_params(Profile::tlqg, 128, d, 9, 3, 4));
  for (std::uint64_t q : random_queries(d, 2000, 9)) {
    if (std::popcount(q & low_mask(9)) <= 3) continue;
    std::set<std::uint32_t> seen;
    std::size_t total = 0;
    for (const auto& part : idx.report_by_node(BitVec(q, d))) {
      total += part.size();
      seen.insert(part.begin(), part.end());
    }
    ASSERT_EQ(seen.size(), total);
  }
}
