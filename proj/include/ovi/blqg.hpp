#pragma once

#include <cstdint>
#include <map>

#include "ovi/index.hpp"
#include "ovi/planner.hpp"
#include "ovi/query_graph.hpp"

namespace ovi {

/// Bottom-levels query graph. Heavy query patterns (popcount of the W part
/// at least w_bits - x_bits) are one probe of a bitmap over every
/// W-orthogonal vector. A light pattern beta reads one duplicated list
/// holding the vectors with more than x_bits ones on W that are orthogonal
/// to beta there, then probes the bottom bitmaps at the boundary level to
/// catch the vectors with few ones on W.
class BlqgIndex final : public OvIndex {
 public:
  static BlqgIndex build(const Instance& inst, const ParamSet& params);

  std::string_view algo() const override { return "blqg"; }
  unsigned d() const override { return inst_.d(); }
  bool query(const BitVec& q, QueryStats* stats = nullptr,
             Traversal traversal = Traversal::first_witness) const override;
  StructureStats structure() const override { return structure_; }
  void save_payload(BinaryWriter& w) const override;
  static BlqgIndex load_payload(BinaryReader& r);

  const CoordSet& w() const noexcept { return w_; }
  unsigned x_bits() const noexcept { return x_bits_; }
  const BitmapMap& bottom() const noexcept { return bottom_; }
  const FlatListMap& upper_lists() const noexcept { return upper_; }
  const BitmapMap& upper_long() const noexcept { return upper_long_; }
  /// Number of upper lists each input vector was placed in, before long
  /// lists were replaced by bitmaps.
  const std::vector<std::uint64_t>& upper_copies() const noexcept { return copies_; }

 private:
  explicit BlqgIndex(Instance inst) : inst_(std::move(inst)) {}
  void recount();

  Instance inst_;
  CoordSet w_;
  CoordSet wbar_;
  unsigned x_bits_ = 0;
  BitmapMap bottom_;
  FlatListMap upper_;
  BitmapMap upper_long_;
  std::vector<std::uint64_t> copies_;
  StructureStats structure_;
};

}  // namespace ovi
