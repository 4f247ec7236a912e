#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ovi/bitvec.hpp"
#include "ovi/instance.hpp"

namespace ovi {

class BinaryWriter;
class BinaryReader;

inline constexpr std::uint64_t kDefaultBudgetBits = std::uint64_t{1} << 33;

/// Dense bit array over all 2^m values of m coordinates. Bit gamma is set iff
/// some candidate has a 0 at every coordinate where gamma has a 1.
class OrthBitmap {
 public:
  OrthBitmap() = default;

  /// `packed` holds candidates already restricted to `coords`.
  static OrthBitmap from_restricted(const CoordSet& coords, std::span<const std::uint64_t> packed,
                                    std::uint64_t budget_bits = kDefaultBudgetBits);

  const CoordSet& coords() const noexcept { return coords_; }
  unsigned m() const noexcept { return coords_.size(); }
  std::uint64_t size_bits() const noexcept { return std::uint64_t{1} << m(); }
  std::uint64_t candidate_count() const noexcept { return candidate_count_; }

  /// Probe by an m-bit packed value.
  bool test(std::uint64_t gamma) const noexcept { return (words_[gamma >> 6] >> (gamma & 63)) & 1u; }
  /// Probe by a full-width query: restricts q to coords() first.
  bool probe(const BitVec& q) const { return test(restrict(q, coords_)); }

  std::uint64_t count_ones() const noexcept;
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  void save(BinaryWriter& w) const;
  static OrthBitmap load(BinaryReader& r);

  friend bool operator==(const OrthBitmap&, const OrthBitmap&) = default;

 private:
  CoordSet coords_;
  std::vector<std::uint64_t> words_;
  std::uint64_t candidate_count_ = 0;
};

/// Throws CapacityError when a 2^m-bit array does not fit `budget_bits`.
void check_bitmap_budget(unsigned m, std::uint64_t budget_bits);

/// In place: bit[g] |= bit[g | 1<<j] for all j, over a 2^m-bit array.
/// Turns exact marks at complement values into the orthogonality predicate.
void superset_closure(std::vector<std::uint64_t>& words, unsigned m);

OrthBitmap build_orth_bitmap(std::span<const std::uint64_t> candidates, const CoordSet& coords,
                             std::uint64_t budget_bits = kDefaultBudgetBits);

/// Full lookup table over all d coordinates; a query is one probe.
OrthBitmap build_lookup(const Instance& inst, std::uint64_t budget_bits = kDefaultBudgetBits);

using BitmapMap = std::map<std::uint64_t, OrthBitmap>;
void save_bitmap_map(BinaryWriter& w, const BitmapMap& m);
BitmapMap load_bitmap_map(BinaryReader& r);

}  // namespace ovi
