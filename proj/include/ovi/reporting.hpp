#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ovi/flat_list_map.hpp"
#include "ovi/index.hpp"
#include "ovi/planner.hpp"
#include "ovi/query_graph.hpp"

namespace ovi {

/// Complete binary tree of level bitmaps over m packed coordinates. The
/// prefix is the low i coordinates; the bitmap of prefix p at level i has
/// one bit per assignment s of the remaining m - i coordinates, set iff some
/// candidate starts with p and is orthogonal to s on the rest.
///
/// All 2^i bitmaps of a level are stored in one 2^m-bit array at position
/// (s << i) | p.
class OrthTree {
 public:
  unsigned depth() const noexcept { return m_; }
  std::size_t candidate_count() const noexcept { return leaves_.element_count(); }

  bool bit(unsigned level, std::uint64_t prefix, std::uint64_t suffix) const noexcept {
    return test(level, (suffix << level) | prefix);
  }
  bool test(unsigned level, std::uint64_t pos) const noexcept {
    return (levels_[level][pos >> 6] >> (pos & 63)) & 1u;
  }
  const std::vector<std::uint64_t>& level_words(unsigned level) const noexcept { return levels_[level]; }
  /// Input indices whose packed value equals `value`.
  std::span<const std::uint32_t> leaf(std::uint64_t value) const noexcept { return leaves_.find(value); }
  const FlatListMap& leaves() const noexcept { return leaves_; }
  std::uint64_t count_ones() const noexcept;

 private:
  friend OrthTree build_orth_tree(std::span<const std::uint64_t>, unsigned,
                                  std::span<const std::uint32_t>, std::uint64_t);
  unsigned m_ = 0;
  std::vector<std::vector<std::uint64_t>> levels_;
  FlatListMap leaves_;
};

/// `packed[k]` is a candidate over m coordinates; `ids[k]` is the index it
/// reports (defaults to k).
OrthTree build_orth_tree(std::span<const std::uint64_t> packed, unsigned m,
                         std::span<const std::uint32_t> ids = {},
                         std::uint64_t budget_bits = kDefaultBudgetBits);
OrthTree build_orth_tree(const Instance& inst, std::uint64_t budget_bits = kDefaultBudgetBits);

/// Ascending ids of candidates orthogonal to q. nodes_visited counts tree
/// bits read.
std::vector<std::uint32_t> report_tree(const OrthTree& tree, std::uint64_t q, QueryStats* stats = nullptr);
std::vector<std::uint32_t> report_tree(const OrthTree& tree, const BitVec& q, QueryStats* stats = nullptr);

/// The tree reduced to its branching bits and leaves. Only the root bitmap
/// is kept; each root 1-bit points at its nearest branching-or-leaf
/// descendant (itself if it qualifies).
class CompressedOrthDAG {
 public:
  static constexpr std::uint32_t kLeafTag = 0xFFFFFFFFu;

  unsigned depth() const noexcept { return root_.m(); }
  const OrthBitmap& root() const noexcept { return root_; }
  std::size_t node_count() const noexcept { return left_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  bool is_leaf(std::uint32_t node) const noexcept { return left_[node] == kLeafTag; }
  std::uint32_t left(std::uint32_t node) const noexcept { return left_[node]; }
  std::uint32_t right(std::uint32_t node) const noexcept { return right_[node]; }
  /// Leaf nodes: the packed value they stand for.
  std::uint64_t leaf_value(std::uint32_t node) const noexcept { return value_[node]; }
  std::span<const std::uint32_t> leaf_ids(std::uint32_t node) const noexcept { return leaves_.find(value_[node]); }
  /// Node for a root 1-bit; only valid when root().test(q).
  std::uint32_t entry(std::uint64_t q) const noexcept;

  StructureStats structure() const;
  void save(BinaryWriter& w) const;
  static CompressedOrthDAG load(BinaryReader& r);

 private:
  friend CompressedOrthDAG compress_tree(const OrthTree& tree);
  void build_rank();

  OrthBitmap root_;
  std::vector<std::uint32_t> rank_;     // 1-bits before each root word
  std::vector<std::uint32_t> entries_;  // by rank of the root bit
  std::vector<std::uint32_t> left_;
  std::vector<std::uint32_t> right_;
  std::vector<std::uint64_t> value_;
  std::size_t edges_ = 0;
  FlatListMap leaves_;
};

CompressedOrthDAG compress_tree(const OrthTree& tree);

/// Same result as report_tree. nodes_visited counts DAG nodes entered.
std::vector<std::uint32_t> report_compressed(const CompressedOrthDAG& dag, std::uint64_t q,
                                             QueryStats* stats = nullptr);
std::vector<std::uint32_t> report_compressed(const CompressedOrthDAG& dag, const BitVec& q,
                                             QueryStats* stats = nullptr);

/// The top-levels query graph with every bitmap replaced by a compressed
/// DAG over the W-complement, and every list kept.
class TlqgReporter final : public OvIndex {
 public:
  static TlqgReporter build(const Instance& inst, const ParamSet& params);

  std::string_view algo() const override { return "tlqg_report"; }
  unsigned d() const override { return inst_.d(); }
  bool query(const BitVec& q, QueryStats* stats = nullptr,
             Traversal traversal = Traversal::first_witness) const override;
  bool supports_report() const override { return true; }
  std::vector<std::uint32_t> report(const BitVec& q, QueryStats* stats = nullptr) const override;
  StructureStats structure() const override { return structure_; }
  void save_payload(BinaryWriter& w) const override;
  static TlqgReporter load_payload(BinaryReader& r);

  const CoordSet& w() const noexcept { return w_; }
  unsigned x_bits() const noexcept { return x_bits_; }
  const std::map<std::uint64_t, CompressedOrthDAG>& top() const noexcept { return top_; }
  const std::map<std::uint64_t, CompressedOrthDAG>& long_lists() const noexcept { return long_; }
  const FlatListMap& lists() const noexcept { return lists_; }

  /// Heavy path only: the result split by visited node, for auditing that
  /// the per-node results are disjoint.
  std::vector<std::vector<std::uint32_t>> report_by_node(const BitVec& q) const;

 private:
  explicit TlqgReporter(Instance inst) : inst_(std::move(inst)) {}
  void recount();

  Instance inst_;
  CoordSet w_;
  CoordSet wbar_;
  unsigned x_bits_ = 0;
  std::map<std::uint64_t, CompressedOrthDAG> top_;
  std::map<std::uint64_t, CompressedOrthDAG> long_;
  FlatListMap lists_;
  StructureStats structure_;
};

std::vector<std::uint32_t> report_tlqg(const TlqgReporter& index, const BitVec& q,
                                       QueryStats* stats = nullptr);

}  // namespace ovi
