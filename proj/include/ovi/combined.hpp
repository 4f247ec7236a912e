#pragma once

#include <cstdint>

#include "ovi/index.hpp"
#include "ovi/planner.hpp"
#include "ovi/query_graph.hpp"

namespace ovi {

/// Top and bottom level bitmaps with thresholded exact-match lists in the
/// middle band. Lists with popcount(key) <= x_bits are not stored; their
/// vectors are reached through the bottom bitmaps at the boundary level.
class CombinedIndex final : public OvIndex {
 public:
  /// Throws PlanningError unless 2 * x_bits < w_bits.
  static CombinedIndex build(const Instance& inst, const ParamSet& params);

  std::string_view algo() const override { return "combined"; }
  unsigned d() const override { return inst_.d(); }
  bool query(const BitVec& q, QueryStats* stats = nullptr,
             Traversal traversal = Traversal::first_witness) const override;
  StructureStats structure() const override { return structure_; }
  void save_payload(BinaryWriter& w) const override;
  static CombinedIndex load_payload(BinaryReader& r);

  const CoordSet& w() const noexcept { return w_; }
  unsigned x_bits() const noexcept { return x_bits_; }
  std::uint64_t tau_mid() const noexcept { return tau_mid_; }
  const BitmapMap& top() const noexcept { return top_; }
  const BitmapMap& bottom() const noexcept { return bottom_; }
  const FlatListMap& middle() const noexcept { return middle_; }
  const BitmapMap& middle_long() const noexcept { return middle_long_; }

 private:
  explicit CombinedIndex(Instance inst) : inst_(std::move(inst)) {}
  void recount();

  Instance inst_;
  CoordSet w_;
  CoordSet wbar_;
  unsigned x_bits_ = 0;
  std::uint64_t tau_mid_ = 1;
  BitmapMap top_;
  BitmapMap bottom_;
  FlatListMap middle_;
  BitmapMap middle_long_;
  StructureStats structure_;
};

}  // namespace ovi
