#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ovi/flat_list_map.hpp"
#include "ovi/index.hpp"
#include "ovi/planner.hpp"

namespace ovi {

struct PartLayout {
  std::vector<CoordSet> parts;  // pairwise disjoint
  CoordSet ignored;             // coordinates outside every part
};

enum class LayoutMode { divisible, epsilon_blocks };

/// divisible: floor(d/part_bits) contiguous parts, leftovers ignored; one
/// layout. epsilon_blocks: m1 = floor(d/eps_bits) blocks, every choice of
/// m2 = floor(part_bits/eps_bits) of them is one layout with a single
/// virtual part. Throws CapacityError when C(m1, m2) > max_layouts.
std::vector<PartLayout> layout_parts(unsigned d, unsigned part_bits, LayoutMode mode,
                                     unsigned eps_bits = 0, std::uint64_t max_layouts = 4096);

/// Low-weight vectors in S1; every other vector lives in the array of its
/// designated part (most ones, ties to the lowest part) under every entry
/// orthogonal to its part bits. Long entries become bitmaps over the
/// remaining coordinates, built over all of S.
class DboIndex final : public OvIndex {
 public:
  static constexpr std::uint32_t kInS1 = 0xffffffffu;

  static DboIndex build(const Instance& inst, const ParamSet& params);

  std::string_view algo() const override { return "dbo"; }
  unsigned d() const override { return inst_.d(); }
  bool query(const BitVec& q, QueryStats* stats = nullptr,
             Traversal traversal = Traversal::first_witness) const override;
  StructureStats structure() const override { return structure_; }
  void save_payload(BinaryWriter& w) const override;
  static DboIndex load_payload(BinaryReader& r);

  const std::vector<CoordSet>& parts() const noexcept { return parts_; }
  const std::vector<std::uint32_t>& s1() const noexcept { return s1_; }
  const FlatListMap& array(std::size_t part) const { return arrays_.at(part); }
  const std::map<std::uint64_t, OrthBitmap>& long_entries(std::size_t part) const {
    return long_entries_.at(part);
  }

  /// Designated part per input index, kInS1 for S1 members.
  const std::vector<std::uint32_t>& designated() const noexcept { return designated_; }
  /// Entries each vector was placed under before long-entry pruning.
  const std::vector<std::uint64_t>& entries_per_vector() const noexcept { return entries_per_vector_; }
  std::uint64_t elements_before_pruning() const noexcept { return elements_before_pruning_; }

 private:
  explicit DboIndex(Instance inst) : inst_(std::move(inst)) {}

  Instance inst_;
  std::vector<CoordSet> parts_;
  std::vector<std::uint32_t> s1_;
  std::vector<FlatListMap> arrays_;
  std::vector<std::map<std::uint64_t, OrthBitmap>> long_entries_;
  std::vector<std::uint32_t> designated_;
  std::vector<std::uint64_t> entries_per_vector_;
  std::uint64_t elements_before_pruning_ = 0;
  StructureStats structure_;
};

}  // namespace ovi
