#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ovi {

class BinaryWriter;
class BinaryReader;

/// Immutable map from a 64-bit key to an ascending list of 32-bit input
/// indices, stored as sorted keys plus CSR offsets. Absent keys cost nothing.
class FlatListMap {
 public:
  using Entry = std::pair<std::uint64_t, std::uint32_t>;

  FlatListMap() : offsets_{0} {}

  /// Takes (key, index) pairs in any order.
  static FlatListMap from_pairs(std::vector<Entry> pairs);

  std::size_t key_count() const noexcept { return keys_.size(); }
  std::size_t element_count() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return keys_.empty(); }

  /// Empty span for an absent key.
  std::span<const std::uint32_t> find(std::uint64_t key) const noexcept {
    const auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return {};
    return list_at(static_cast<std::size_t>(it - keys_.begin()));
  }
  bool contains(std::uint64_t key) const noexcept {
    return std::binary_search(keys_.begin(), keys_.end(), key);
  }

  std::uint64_t key_at(std::size_t pos) const noexcept { return keys_[pos]; }
  std::span<const std::uint32_t> list_at(std::size_t pos) const noexcept {
    return std::span<const std::uint32_t>(elements_).subspan(offsets_[pos],
                                                             offsets_[pos + 1] - offsets_[pos]);
  }
  std::size_t max_list_length() const noexcept;

  /// Copy without the lists whose key fails `keep`.
  template <class Pred>
  FlatListMap filtered(Pred keep) const {
    FlatListMap out;
    for (std::size_t p = 0; p < keys_.size(); ++p) {
      if (!keep(keys_[p], list_at(p))) continue;
      auto l = list_at(p);
      out.keys_.push_back(keys_[p]);
      out.elements_.insert(out.elements_.end(), l.begin(), l.end());
      out.offsets_.push_back(static_cast<std::uint32_t>(out.elements_.size()));
    }
    return out;
  }

  void save(BinaryWriter& w) const;
  static FlatListMap load(BinaryReader& r);

  friend bool operator==(const FlatListMap&, const FlatListMap&) = default;

 private:
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> elements_;
};

}  // namespace ovi
