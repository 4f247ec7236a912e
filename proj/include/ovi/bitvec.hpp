#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "ovi/error.hpp"

namespace ovi {

inline constexpr unsigned kMaxWidth = 64;

// Mask with the low `m` bits set; m may be 64.
constexpr std::uint64_t low_mask(unsigned m) noexcept {
  return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
}

// Packs the bits of `value` selected by `mask` into the low bits of the
// result, lowest selected position first (software PEXT).
constexpr std::uint64_t extract_bits(std::uint64_t value,
                                     std::uint64_t mask) noexcept {
  std::uint64_t out = 0;
  unsigned k = 0;
  while (mask) {
    const std::uint64_t low = mask & (~mask + 1);
    if (value & low) out |= std::uint64_t{1} << k;
    ++k;
    mask ^= low;
  }
  return out;
}

// Inverse of extract_bits: scatters the low popcount(mask) bits of `packed`
// onto the positions of `mask` (software PDEP).
constexpr std::uint64_t deposit_bits(std::uint64_t packed,
                                     std::uint64_t mask) noexcept {
  std::uint64_t out = 0;
  unsigned k = 0;
  while (mask) {
    const std::uint64_t low = mask & (~mask + 1);
    if ((packed >> k) & 1u) out |= low;
    ++k;
    mask ^= low;
  }
  return out;
}

/// A d-bit boolean vector, 1 <= d <= 64. Coordinate j is bit j of value().
class BitVec {
 public:
  constexpr BitVec() = default;
  constexpr BitVec(std::uint64_t bits, unsigned width) : bits_(bits), width_(width) {
    if (width > kMaxWidth) throw ContractError("BitVec width above 64");
    if (bits & ~low_mask(width)) throw ContractError("BitVec has bits above its width");
  }

  /// Parses '0'/'1' characters; character j is coordinate j.
  static BitVec from_string(std::string_view s);

  constexpr std::uint64_t value() const noexcept { return bits_; }
  constexpr unsigned width() const noexcept { return width_; }
  constexpr bool test(unsigned j) const noexcept { return (bits_ >> j) & 1u; }
  constexpr unsigned popcount() const noexcept { return static_cast<unsigned>(std::popcount(bits_)); }

  std::string to_string() const;

  friend constexpr bool operator==(const BitVec&, const BitVec&) = default;

 private:
  std::uint64_t bits_ = 0;
  unsigned width_ = 0;
};

/// A subset of the d coordinates, stored as a width-d mask.
class CoordSet {
 public:
  constexpr CoordSet() = default;
  explicit constexpr CoordSet(BitVec mask) : mask_(mask) {}
  constexpr CoordSet(std::uint64_t mask, unsigned width) : mask_(mask, width) {}

  static constexpr CoordSet all(unsigned d) { return {low_mask(d), d}; }
  /// Coordinates [lo, hi) of a width-d vector.
  static constexpr CoordSet range(unsigned lo, unsigned hi, unsigned d) {
    return {low_mask(hi) & ~low_mask(lo), d};
  }

  constexpr const BitVec& mask() const noexcept { return mask_; }
  constexpr std::uint64_t bits() const noexcept { return mask_.value(); }
  constexpr unsigned width() const noexcept { return mask_.width(); }
  constexpr unsigned size() const noexcept { return mask_.popcount(); }
  constexpr CoordSet complement() const {
    return {~mask_.value() & low_mask(mask_.width()), mask_.width()};
  }

  friend constexpr bool operator==(const CoordSet&, const CoordSet&) = default;

 private:
  BitVec mask_;
};

inline void require_same_width(unsigned a, unsigned b) {
  if (a != b) {
    throw ContractError("width mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

/// True iff u and v share no 1-coordinate.
inline bool orthogonal(const BitVec& u, const BitVec& v) {
  require_same_width(u.width(), v.width());
  return (u.value() & v.value()) == 0;
}

/// The bits of v on `coords`, packed in ascending coordinate order.
inline std::uint64_t restrict(const BitVec& v, const CoordSet& coords) {
  require_same_width(v.width(), coords.width());
  return extract_bits(v.value(), coords.bits());
}

}  // namespace ovi
