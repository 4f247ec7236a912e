#include "ovi/index.hpp"

#include <algorithm>
#include <string>

#include "ovi/serialize.hpp"

namespace ovi {

bool query_scan(const Instance& inst, const BitVec& q) {
  require_same_width(q.width(), inst.d());
  for (std::uint64_t v : inst.values()) {
    if ((v & q.value()) == 0) return true;
  }
  return false;
}

std::vector<std::uint32_t> report_scan(const Instance& inst, const BitVec& q) {
  require_same_width(q.width(), inst.d());
  std::vector<std::uint32_t> out;
  const auto vals = inst.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if ((vals[i] & q.value()) == 0) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::vector<std::uint32_t> OvIndex::report(const BitVec&, QueryStats*) const {
  throw ContractError(std::string(algo()) + " index does not support reporting");
}

void save_vectors(BinaryWriter& w, const Instance& inst) {
  w.u32(inst.d());
  w.u64(inst.n());
  for (std::uint64_t v : inst.values()) w.u64(v);
}

Instance load_vectors(BinaryReader& r) {
  const auto d = r.u32();
  const auto n = r.u64();
  if (n == 0 || n > (std::uint64_t{1} << 32)) throw ParseError("bad vector count", 0);
  std::vector<std::uint64_t> v;
  v.reserve(std::min<std::uint64_t>(n, std::uint64_t{1} << 20));
  for (std::uint64_t i = 0; i < n; ++i) v.push_back(r.u64());
  return Instance(d, std::move(v));
}

bool ScanIndex::query(const BitVec& q, QueryStats* stats, Traversal traversal) const {
  require_same_width(q.width(), inst_.d());
  bool found = false;
  std::uint64_t scanned = 0;
  for (std::uint64_t v : inst_.values()) {
    ++scanned;
    if ((v & q.value()) == 0) {
      found = true;
      if (traversal == Traversal::first_witness) break;
    }
  }
  if (stats) {
    stats->list_elements_scanned += scanned;
    stats->answer = found;
  }
  return found;
}

std::vector<std::uint32_t> ScanIndex::report(const BitVec& q, QueryStats* stats) const {
  auto out = report_scan(inst_, q);
  if (stats) {
    stats->list_elements_scanned += inst_.n();
    stats->answer = !out.empty();
  }
  return out;
}

StructureStats ScanIndex::structure() const {
  StructureStats s;
  s.list_count = 1;
  s.list_elements = inst_.n();
  return s;
}

void ScanIndex::save_payload(BinaryWriter& w) const { save_vectors(w, inst_); }

ScanIndex ScanIndex::load_payload(BinaryReader& r) { return ScanIndex(load_vectors(r)); }

bool LookupIndex::query(const BitVec& q, QueryStats* stats, Traversal) const {
  const bool hit = bitmap_.probe(q);
  if (stats) {
    ++stats->bitmap_lookups;
    stats->answer = hit;
  }
  return hit;
}

StructureStats LookupIndex::structure() const {
  StructureStats s;
  s.bitmap_count = 1;
  s.bitmap_bits = bitmap_.size_bits();
  return s;
}

void LookupIndex::save_payload(BinaryWriter& w) const { bitmap_.save(w); }

LookupIndex LookupIndex::load_payload(BinaryReader& r) { return LookupIndex(OrthBitmap::load(r)); }

}  // namespace ovi
