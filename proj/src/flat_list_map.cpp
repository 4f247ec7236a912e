#include "ovi/flat_list_map.hpp"

#include "ovi/error.hpp"
#include "ovi/serialize.hpp"

namespace ovi {

FlatListMap FlatListMap::from_pairs(std::vector<Entry> pairs) {
  std::sort(pairs.begin(), pairs.end());
  FlatListMap out;
  out.elements_.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i == 0 || pairs[i].first != pairs[i - 1].first) {
      if (i != 0) out.offsets_.push_back(static_cast<std::uint32_t>(i));
      out.keys_.push_back(pairs[i].first);
    }
    out.elements_.push_back(pairs[i].second);
  }
  if (!pairs.empty()) out.offsets_.push_back(static_cast<std::uint32_t>(pairs.size()));
  return out;
}

std::size_t FlatListMap::max_list_length() const noexcept {
  std::size_t best = 0;
  for (std::size_t p = 0; p < keys_.size(); ++p) {
    best = std::max<std::size_t>(best, offsets_[p + 1] - offsets_[p]);
  }
  return best;
}

void FlatListMap::save(BinaryWriter& w) const {
  w.vec_u64(keys_);
  w.vec_u32(offsets_);
  w.vec_u32(elements_);
}

FlatListMap FlatListMap::load(BinaryReader& r) {
  FlatListMap m;
  m.keys_ = r.vec_u64();
  m.offsets_ = r.vec_u32();
  m.elements_ = r.vec_u32();
  if (m.offsets_.size() != m.keys_.size() + 1 || m.offsets_.back() != m.elements_.size()) {
    throw ParseError("corrupt list map", 0);
  }
  for (std::size_t p = 0; p < m.keys_.size(); ++p) {
    if (m.offsets_[p] > m.offsets_[p + 1] || (p && m.keys_[p - 1] >= m.keys_[p])) {
      throw ParseError("corrupt list map", 0);
    }
  }
  if (m.offsets_.front() != 0) throw ParseError("corrupt list map", 0);
  return m;
}

}  // namespace ovi
