#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ovi/error.hpp"

namespace ovi {

// Little-endian writer/reader used by the index container.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof v);
    __builtin_memcpy(&bits, &v, sizeof v);
    u64(bits);
  }
  void str(const std::string& s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void vec_u64(const std::vector<std::uint64_t>& v) {
    u64(v.size());
    for (auto x : v) u64(x);
  }
  void vec_u32(const std::vector<std::uint32_t>& v) {
    u64(v.size());
    for (auto x : v) u32(x);
  }

 private:
  void le(std::uint64_t v, int bytes) {
    char b[8];
    for (int i = 0; i < bytes; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out_.write(b, bytes);
  }

  std::ostream& out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    __builtin_memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::string str() {
    const auto len = length();
    std::string s(len, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(len));
    if (!in_) throw ParseError("truncated container", 0);
    return s;
  }
  std::vector<std::uint64_t> vec_u64() {
    std::vector<std::uint64_t> v(length());
    for (auto& x : v) x = u64();
    return v;
  }
  std::vector<std::uint32_t> vec_u32() {
    std::vector<std::uint32_t> v(length());
    for (auto& x : v) x = u32();
    return v;
  }

 private:
  std::uint64_t length() {
    const auto len = u64();
    if (len > (std::uint64_t{1} << 36)) throw ParseError("implausible length in container", 0);
    return len;
  }

  std::uint64_t le(int bytes) {
    unsigned char b[8] = {};
    in_.read(reinterpret_cast<char*>(b), bytes);
    if (!in_) throw ParseError("truncated container", 0);
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    return v;
  }

  std::istream& in_;
};

}  // namespace ovi
