#include "ovi/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ovi {

BitVec BitVec::from_string(std::string_view s) {
  if (s.empty() || s.size() > kMaxWidth) {
    throw ContractError("bit string length must be in [1, 64]");
  }
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] == '1') {
      bits |= std::uint64_t{1} << j;
    } else if (s[j] != '0') {
      throw ContractError(std::string("non-0/1 character '") + s[j] + "' in bit string");
    }
  }
  return {bits, static_cast<unsigned>(s.size())};
}

std::string BitVec::to_string() const {
  std::string s(width_, '0');
  for (unsigned j = 0; j < width_; ++j) {
    if (test(j)) s[j] = '1';
  }
  return s;
}

Instance::Instance(unsigned d, std::vector<std::uint64_t> vectors, std::string meta)
    : d_(d), vectors_(std::move(vectors)), meta_(std::move(meta)) {
  if (d == 0 || d > kMaxWidth) throw ContractError("instance width d must be in [1, 64]");
  if (vectors_.empty()) throw ContractError("instance must hold at least one vector");
  const std::uint64_t over = ~low_mask(d);
  for (std::uint64_t v : vectors_) {
    if (v & over) throw ContractError("instance vector has bits above width d");
  }
}

double Instance::effective_c() const {
  const double lg = std::log2(static_cast<double>(n()));
  return lg > 0 ? d_ / lg : static_cast<double>(d_);
}

std::uint64_t Instance::digest() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  mix(vectors_.size());
  mix(d_);
  for (std::uint64_t v : vectors_) mix(v);
  return h;
}

namespace {

bool parse_kv(const std::string& tok, const char* key, unsigned long long& out) {
  const std::string prefix = std::string(key) + "=";
  if (tok.rfind(prefix, 0) != 0) return false;
  const std::string digits = tok.substr(prefix.size());
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) return false;
  out = std::stoull(digits);
  return true;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b, 8);
}

std::uint64_t get_le(std::istream& in, int bytes) {
  unsigned char b[8] = {};
  in.read(reinterpret_cast<char*>(b), bytes);
  if (!in) throw ParseError("truncated binary instance", 0);
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

}  // namespace

Instance read_instance_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "OVI 1") {
    throw ParseError("expected header 'OVI 1'", 1);
  }
  if (!std::getline(in, line)) throw ParseError("missing 'n=<int> d=<int>' line", 2);
  std::istringstream hdr(line);
  std::string tn, td, extra;
  unsigned long long n = 0, d = 0;
  if (!(hdr >> tn >> td) || (hdr >> extra) || !parse_kv(tn, "n", n) || !parse_kv(td, "d", d)) {
    throw ParseError("malformed size line '" + line + "'", 2);
  }
  if (n == 0) throw ParseError("n must be at least 1", 2);
  if (d == 0 || d > kMaxWidth) throw ParseError("d must be in [1, 64]", 2);

  std::vector<std::uint64_t> vectors;
  vectors.reserve(n);
  for (unsigned long long i = 0; i < n; ++i) {
    const std::size_t lineno = static_cast<std::size_t>(i) + 3;
    if (!std::getline(in, line)) throw ParseError("expected " + std::to_string(n) + " vectors", lineno);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != d) {
      throw ParseError("vector has " + std::to_string(line.size()) + " characters, expected " +
                           std::to_string(d),
                       lineno);
    }
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < line.size(); ++j) {
      if (line[j] == '1') {
        bits |= std::uint64_t{1} << j;
      } else if (line[j] != '0') {
        throw ParseError(std::string("non-0/1 character '") + line[j] + "'", lineno);
      }
    }
    vectors.push_back(bits);
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") throw ParseError("trailing data after vectors", 0);
  }
  return Instance(static_cast<unsigned>(d), std::move(vectors));
}

void write_instance_text(const Instance& inst, std::ostream& out) {
  out << "OVI 1\n" << "n=" << inst.n() << " d=" << inst.d() << '\n';
  for (std::size_t i = 0; i < inst.n(); ++i) out << inst.at(i).to_string() << '\n';
}

Instance read_instance_binary(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "OVIB") throw ParseError("bad binary magic", 0);
  const auto n = get_le(in, 4);
  const auto d = get_le(in, 4);
  if (n == 0 || d == 0 || d > kMaxWidth) throw ParseError("bad binary n/d", 0);
  std::vector<std::uint64_t> vectors;
  vectors.reserve(std::min<std::uint64_t>(n, std::uint64_t{1} << 20));
  for (std::uint64_t i = 0; i < n; ++i) vectors.push_back(get_le(in, 8));
  return Instance(static_cast<unsigned>(d), std::move(vectors));
}

void write_instance_binary(const Instance& inst, std::ostream& out) {
  out.write("OVIB", 4);
  put_u32(out, static_cast<std::uint32_t>(inst.n()));
  put_u32(out, inst.d());
  for (std::uint64_t v : inst.values()) put_u64(out, v);
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  if (in.peek() == 'O') {
    char head[4] = {};
    in.read(head, 4);
    in.clear();
    in.seekg(0);
    if (std::string(head, 4) == "OVIB") return read_instance_binary(in);
  }
  return read_instance_text(in);
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  if (path.extension() == ".ovib") {
    write_instance_binary(inst, out);
  } else {
    write_instance_text(inst, out);
  }
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace ovi
