#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ovi/bitvec.hpp"

namespace ovi {

/// The input set S: n vectors of width d. Duplicates are allowed.
class Instance {
 public:
  Instance(unsigned d, std::vector<std::uint64_t> vectors, std::string meta = {});

  unsigned d() const noexcept { return d_; }
  std::size_t n() const noexcept { return vectors_.size(); }
  /// d / log2(n); informational only.
  double effective_c() const;

  BitVec at(std::size_t i) const { return {vectors_[i], d_}; }
  std::span<const std::uint64_t> values() const noexcept { return vectors_; }
  const std::string& meta() const noexcept { return meta_; }

  /// FNV-1a over (n, d, vectors); binds a saved index to its instance.
  std::uint64_t digest() const noexcept;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.d_ == b.d_ && a.vectors_ == b.vectors_;
  }

 private:
  unsigned d_;
  std::vector<std::uint64_t> vectors_;
  std::string meta_;
};

// Text format:
//   OVI 1
//   n=<int> d=<int>
//   n lines of d characters from {0,1}; character j is coordinate j.
Instance read_instance_text(std::istream& in);
void write_instance_text(const Instance& inst, std::ostream& out);

// Binary format: "OVIB", u32 n, u32 d, then n little-endian u64 words.
Instance read_instance_binary(std::istream& in);
void write_instance_binary(const Instance& inst, std::ostream& out);

/// Reads either format, sniffing the magic.
Instance read_instance(const std::filesystem::path& path);
/// Writes text, or binary when the extension is ".ovib".
void write_instance(const Instance& inst, const std::filesystem::path& path);

}  // namespace ovi
