#include "ovi/orth_bitmap.hpp"

#include <bit>
#include <string>

#include "ovi/serialize.hpp"

namespace ovi {

namespace {

constexpr std::uint64_t kLowHalf[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

std::size_t word_count(unsigned m) { return m >= 6 ? std::size_t{1} << (m - 6) : 1; }

}  // namespace

void check_bitmap_budget(unsigned m, std::uint64_t budget_bits) {
  if (m >= 63 || (std::uint64_t{1} << m) > budget_bits) {
    throw CapacityError("bitmap over " + std::to_string(m) + " coordinates needs 2^" +
                        std::to_string(m) + " bits, over the budget of " +
                        std::to_string(budget_bits) + " bits");
  }
}

void superset_closure(std::vector<std::uint64_t>& words, unsigned m) {
  for (unsigned j = 0; j < m && j < 6; ++j) {
    const unsigned shift = 1u << j;
    for (auto& w : words) w |= (w >> shift) & kLowHalf[j];
  }
  for (unsigned j = 6; j < m; ++j) {
    const std::size_t stride = std::size_t{1} << (j - 6);
    for (std::size_t base = 0; base < words.size(); base += 2 * stride) {
      for (std::size_t k = 0; k < stride; ++k) words[base + k] |= words[base + stride + k];
    }
  }
}

OrthBitmap OrthBitmap::from_restricted(const CoordSet& coords,
                                       std::span<const std::uint64_t> packed,
                                       std::uint64_t budget_bits) {
  const unsigned m = coords.size();
  check_bitmap_budget(m, budget_bits);
  OrthBitmap bm;
  bm.coords_ = coords;
  bm.candidate_count_ = packed.size();
  bm.words_.assign(word_count(m), 0);
  const std::uint64_t full = low_mask(m);
  for (std::uint64_t r : packed) {
    const std::uint64_t g = ~r & full;
    bm.words_[g >> 6] |= std::uint64_t{1} << (g & 63);
  }
  superset_closure(bm.words_, m);
  return bm;
}

std::uint64_t OrthBitmap::count_ones() const noexcept {
  std::uint64_t c = 0;
  for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

void OrthBitmap::save(BinaryWriter& w) const {
  w.u64(coords_.bits());
  w.u32(coords_.width());
  w.u64(candidate_count_);
  w.vec_u64(words_);
}

OrthBitmap OrthBitmap::load(BinaryReader& r) {
  OrthBitmap bm;
  const auto mask = r.u64();
  const auto width = r.u32();
  bm.coords_ = CoordSet(mask, width);
  bm.candidate_count_ = r.u64();
  bm.words_ = r.vec_u64();
  if (bm.words_.size() != word_count(bm.m())) throw ParseError("bitmap size mismatch", 0);
  return bm;
}

OrthBitmap build_orth_bitmap(std::span<const std::uint64_t> candidates, const CoordSet& coords,
                             std::uint64_t budget_bits) {
  check_bitmap_budget(coords.size(), budget_bits);
  std::vector<std::uint64_t> packed;
  packed.reserve(candidates.size());
  for (std::uint64_t v : candidates) {
    if (v & ~low_mask(coords.width())) throw ContractError("candidate wider than coordinate set");
    packed.push_back(extract_bits(v, coords.bits()));
  }
  return OrthBitmap::from_restricted(coords, packed, budget_bits);
}

OrthBitmap build_lookup(const Instance& inst, std::uint64_t budget_bits) {
  return build_orth_bitmap(inst.values(), CoordSet::all(inst.d()), budget_bits);
}

void save_bitmap_map(BinaryWriter& w, const BitmapMap& m) {
  w.u64(m.size());
  for (const auto& [key, bm] : m) {
    w.u64(key);
    bm.save(w);
  }
}

BitmapMap load_bitmap_map(BinaryReader& r) {
  BitmapMap m;
  const auto count = r.u64();
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto key = r.u64();
    m.emplace_hint(m.end(), key, OrthBitmap::load(r));
  }
  return m;
}

}  // namespace ovi
