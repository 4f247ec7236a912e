#pragma once

#include <cstdint>
#include <map>

#include "ovi/index.hpp"
#include "ovi/planner.hpp"
#include "ovi/query_graph.hpp"

namespace ovi {

enum class TlqgMode { standard, random_opt };

/// Top-levels query graph. Light query patterns (popcount of the W part at
/// most x_bits) are answered by one probe of a bitmap built over every
/// W-orthogonal vector; heavier patterns walk the reachable lists, probing
/// a per-list bitmap for long lists.
///
/// random_opt keeps only the top delta_bits levels and refuses to build when
/// some list is longer than ell_max.
class TlqgIndex final : public OvIndex {
 public:
  static TlqgIndex build(const Instance& inst, const ParamSet& params,
                         TlqgMode mode = TlqgMode::standard);

  std::string_view algo() const override { return mode_ == TlqgMode::standard ? "tlqg" : "random_opt"; }
  unsigned d() const override { return inst_.d(); }
  bool query(const BitVec& q, QueryStats* stats = nullptr,
             Traversal traversal = Traversal::first_witness) const override;
  StructureStats structure() const override { return structure_; }
  void save_payload(BinaryWriter& w) const override;
  static TlqgIndex load_payload(BinaryReader& r);

  TlqgMode mode() const noexcept { return mode_; }
  const CoordSet& w() const noexcept { return w_; }
  unsigned x_bits() const noexcept { return x_bits_; }
  const std::map<std::uint64_t, OrthBitmap>& top() const noexcept { return top_; }
  const std::map<std::uint64_t, OrthBitmap>& long_lists() const noexcept { return long_; }
  /// Lists still held as elements (long lists are dropped).
  const FlatListMap& lists() const noexcept { return lists_; }
  std::size_t max_list_length() const noexcept { return max_list_length_; }

 private:
  explicit TlqgIndex(Instance inst) : inst_(std::move(inst)) {}
  void recount();

  Instance inst_;
  TlqgMode mode_ = TlqgMode::standard;
  CoordSet w_;
  CoordSet wbar_;
  unsigned x_bits_ = 0;
  std::map<std::uint64_t, OrthBitmap> top_;
  std::map<std::uint64_t, OrthBitmap> long_;
  FlatListMap lists_;
  std::size_t max_list_length_ = 0;
  StructureStats structure_;
};

/// Bitmaps over `rest` for every alpha in `alphas`: candidates are the
/// vectors whose W part is orthogonal to alpha. Shared by the top and
/// bottom levels of the query-graph indexes.
std::map<std::uint64_t, OrthBitmap> build_level_bitmaps(const Instance& inst, const CoordSet& w,
                                                        const std::vector<std::uint64_t>& alphas,
                                                        std::uint64_t budget_bits);

/// All alpha within w_bits with lo <= popcount(alpha) <= hi.
std::vector<std::uint64_t> alphas_by_weight(unsigned w_bits, unsigned lo, unsigned hi);

}  // namespace ovi
