#include "ovi/set_disjointness.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "ovi/query_graph.hpp"
#include "ovi/serialize.hpp"

namespace ovi {

std::uint64_t SetFamily::total() const noexcept {
  std::uint64_t t = 0;
  for (const auto& s : sets) t += s.size();
  return t;
}

void SetFamily::check(std::uint64_t universe) const {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& s = sets[i];
    for (std::size_t p = 0; p < s.size(); ++p) {
      if (s[p] >= universe) throw ContractError("set " + std::to_string(i) + " holds an id out of range");
      if (p && s[p - 1] >= s[p]) throw ContractError("set " + std::to_string(i) + " is not sorted and unique");
    }
  }
}

void write_family(const SetFamily& family, std::ostream& out) {
  for (const auto& s : family.sets) {
    for (std::size_t p = 0; p < s.size(); ++p) out << (p ? " " : "") << s[p];
    out << '\n';
  }
}

SetFamily read_family(std::istream& in) {
  SetFamily f;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::uint32_t> s;
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(tok, &used);
        if (used != tok.size() || v > 0xFFFFFFFEul) throw ParseError("bad set element '" + tok + "'", lineno);
        s.push_back(static_cast<std::uint32_t>(v));
      } catch (const std::logic_error&) {
        throw ParseError("bad set element '" + tok + "'", lineno);
      }
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    f.sets.push_back(std::move(s));
  }
  return f;
}

FamilyStats measure_family(const SetFamily& family) {
  FamilyStats st;
  st.set_count = family.size();
  for (const auto& s : family.sets) {
    st.total += s.size();
    ++st.size_histogram[s.size()];
    for (std::uint32_t e : s) st.max_duplication = std::max(st.max_duplication, ++st.duplication[e]);
  }
  return st;
}

void SdIndex::index_members() {
  members_.clear();
  members_.reserve(family_.total());
  heavy_.clear();
  heavy_rank_.assign(family_.size(), kEmptySet);
  for (std::size_t i = 0; i < family_.size(); ++i) {
    for (std::uint32_t e : family_.sets[i]) members_.insert((std::uint64_t{i} << 32) | e);
    if (family_.sets[i].size() > tau_s_) {
      heavy_rank_[i] = static_cast<std::uint32_t>(heavy_.size());
      heavy_.push_back(static_cast<std::uint32_t>(i));
    }
  }
  rank_bits_ = std::max(1u, static_cast<unsigned>(std::bit_width(heavy_.size())));
}

std::uint64_t SdIndex::tuple_key(std::span<const std::uint32_t> sorted_ids) const {
  std::uint64_t key = 0;
  for (std::uint32_t id : sorted_ids) key = (key << rank_bits_) | heavy_rank_[id];
  return key;
}

SdIndex SdIndex::build(SetFamily family, unsigned k, std::uint64_t tau_s, std::uint64_t table_budget) {
  if (k < 2) throw ContractError("arity k must be at least 2");
  if (tau_s < 1) throw ContractError("tau_s must be at least 1");
  SdIndex idx;
  idx.family_ = std::move(family);
  idx.k_ = k;
  idx.tau_s_ = tau_s;
  idx.index_members();

  const std::size_t h = idx.heavy_.size();
  if (h == 0) return idx;
  const double entries = binomial(static_cast<unsigned>(h + k - 1), k);
  if (entries > static_cast<double>(table_budget)) {
    throw CapacityError("heavy table needs " + std::to_string(entries) + " entries for " + std::to_string(h) +
                        " heavy sets, over the budget of " + std::to_string(table_budget) +
                        "; use a larger tau_s");
  }
  if (static_cast<std::uint64_t>(k) * idx.rank_bits_ > 64) {
    throw CapacityError("heavy tuples do not fit a 64-bit key; use a larger tau_s");
  }
  idx.table_.reserve(static_cast<std::size_t>(entries));

  // Nondecreasing k-tuples of heavy ranks.
  std::vector<std::uint32_t> rank(k, 0);
  std::vector<std::uint32_t> ids(k);
  while (true) {
    for (unsigned p = 0; p < k; ++p) ids[p] = idx.heavy_[rank[p]];
    std::uint32_t smallest = ids[0];
    for (std::uint32_t id : ids) {
      if (idx.family_.sets[id].size() < idx.family_.sets[smallest].size()) smallest = id;
    }
    bool hit = false;
    for (std::uint32_t e : idx.family_.sets[smallest]) {
      hit = std::all_of(ids.begin(), ids.end(), [&](std::uint32_t id) { return idx.member(id, e); });
      if (hit) break;
    }
    idx.table_.emplace(idx.tuple_key(ids), hit);

    int p = static_cast<int>(k) - 1;
    while (p >= 0 && rank[p] == h - 1) --p;
    if (p < 0) break;
    ++rank[p];
    for (unsigned q = static_cast<unsigned>(p) + 1; q < k; ++q) rank[q] = rank[p];
  }
  return idx;
}

bool SdIndex::query(std::span<const std::uint32_t> ids, QueryStats* stats) const {
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  if (ids.empty()) return st.answer = true;
  for (std::uint32_t id : ids) {
    if (id == kEmptySet) return st.answer = false;
    if (id >= family_.size()) throw ContractError("set id out of range");
  }
  std::vector<std::uint32_t> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  const bool all_heavy = std::all_of(sorted.begin(), sorted.end(), [&](std::uint32_t id) { return is_heavy(id); });
  if (all_heavy && sorted.size() == k_) {
    ++st.bitmap_lookups;
    return st.answer = table_.at(tuple_key(sorted));
  }
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::uint32_t pick = kEmptySet;
  for (std::uint32_t id : sorted) {
    if (!all_heavy && is_heavy(id)) continue;
    if (pick == kEmptySet || family_.sets[id].size() < family_.sets[pick].size()) pick = id;
  }
  ++st.nodes_visited;
  for (std::uint32_t e : family_.sets[pick]) {
    ++st.list_elements_scanned;
    bool all = true;
    for (std::uint32_t id : sorted) {
      if (id == pick) continue;
      ++st.membership_probes;
      if (!member(id, e)) {
        all = false;
        break;
      }
    }
    if (all) return st.answer = true;
  }
  return st.answer = false;
}

bool sd_query(const SdIndex& index, std::span<const std::uint32_t> ids, QueryStats* stats) {
  return index.query(ids, stats);
}

StructureStats SdIndex::structure() const {
  StructureStats s;
  s.list_count = family_.size();
  s.list_elements = family_.total();
  s.table_entries = table_.size();
  return s;
}

void SdIndex::save(BinaryWriter& w) const {
  w.u32(k_);
  w.u64(tau_s_);
  w.u64(family_.size());
  for (const auto& s : family_.sets) w.vec_u32(s);
  std::vector<std::pair<std::uint64_t, bool>> entries(table_.begin(), table_.end());
  std::sort(entries.begin(), entries.end());
  w.u64(entries.size());
  for (const auto& [key, hit] : entries) {
    w.u64(key);
    w.u8(hit ? 1 : 0);
  }
}

SdIndex SdIndex::load(BinaryReader& r) {
  SdIndex idx;
  idx.k_ = r.u32();
  idx.tau_s_ = r.u64();
  if (idx.k_ < 2 || idx.tau_s_ < 1) throw ParseError("bad set-disjointness parameters", 0);
  const auto count = r.u64();
  if (count > 0xFFFFFFFEull) throw ParseError("implausible set count", 0);
  idx.family_.sets.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) idx.family_.sets.push_back(r.vec_u32());
  idx.index_members();
  const auto entries = r.u64();
  for (std::uint64_t i = 0; i < entries; ++i) {
    const auto key = r.u64();
    idx.table_.emplace(key, r.u8() != 0);
  }
  const double expect = idx.heavy_.empty() ? 0.0 : binomial(static_cast<unsigned>(idx.heavy_.size() + idx.k_ - 1), idx.k_);
  if (static_cast<double>(idx.table_.size()) != expect) throw ParseError("heavy table size mismatch", 0);
  return idx;
}

SetFamily reduce_simple(const Instance& inst) {
  SetFamily f;
  f.sets.resize(inst.d());
  const auto vals = inst.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    for (unsigned j = 0; j < inst.d(); ++j) {
      if (!((vals[i] >> j) & 1u)) f.sets[j].push_back(static_cast<std::uint32_t>(i));
    }
  }
  return f;
}

SdSimpleIndex SdSimpleIndex::build(const Instance& inst, const ParamSet& params) {
  SdSimpleIndex idx;
  idx.d_ = inst.d();
  idx.n_ = inst.n();
  idx.sd_ = SdIndex::build(reduce_simple(inst), 2, params.tau_s, params.table_budget);
  return idx;
}

bool SdSimpleIndex::query(const BitVec& q, QueryStats* stats, Traversal) const {
  require_same_width(q.width(), d_);
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  if (q.value() == 0) return st.answer = n_ > 0;
  std::vector<std::uint32_t> ids;
  for (std::uint64_t v = q.value(); v; v &= v - 1) ids.push_back(static_cast<std::uint32_t>(std::countr_zero(v)));
  return sd_.query(ids, &st);
}

void SdSimpleIndex::save_payload(BinaryWriter& w) const {
  w.u32(d_);
  w.u64(n_);
  sd_.save(w);
}

SdSimpleIndex SdSimpleIndex::load_payload(BinaryReader& r) {
  SdSimpleIndex idx;
  idx.d_ = r.u32();
  idx.n_ = r.u64();
  if (idx.d_ == 0 || idx.d_ > kMaxWidth) throw ParseError("bad dimension", 0);
  idx.sd_ = SdIndex::load(r);
  if (idx.sd_.family().size() != idx.d_) throw ParseError("family does not have one set per coordinate", 0);
  return idx;
}

std::vector<unsigned> random_permutation(unsigned d, std::uint64_t seed) {
  std::vector<unsigned> perm(d);
  for (unsigned j = 0; j < d; ++j) perm[j] = j;
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

std::vector<CoordSet> permuted_parts(const std::vector<unsigned>& perm, unsigned k) {
  const unsigned d = static_cast<unsigned>(perm.size());
  if (k == 0 || k > d) throw ContractError("part count must be in [1, d]");
  std::vector<CoordSet> parts;
  unsigned pos = 0;
  for (unsigned j = 0; j < k; ++j) {
    const unsigned len = d / k + (j < d % k ? 1 : 0);
    std::uint64_t mask = 0;
    for (unsigned t = 0; t < len; ++t) mask |= std::uint64_t{1} << perm[pos++];
    parts.emplace_back(mask, d);
  }
  return parts;
}

SdPartitionedIndex SdPartitionedIndex::build(const Instance& inst, const ParamSet& params, std::uint64_t seed) {
  return build_with(inst, params, random_permutation(inst.d(), seed));
}

SdPartitionedIndex SdPartitionedIndex::build_with(const Instance& inst, const ParamSet& params,
                                                  std::vector<unsigned> perm) {
  const unsigned d = inst.d();
  if (params.d != d) throw ContractError("params planned for a different d");
  if (perm.size() != d) throw ContractError("permutation has the wrong length");
  {
    std::vector<unsigned> check = perm;
    std::sort(check.begin(), check.end());
    for (unsigned j = 0; j < d; ++j) {
      if (check[j] != j) throw ContractError("not a permutation of the coordinates");
    }
  }
  const unsigned k = params.sd_k;
  if (k < 2) throw ContractError("arity k must be at least 2");

  SdPartitionedIndex idx(inst);
  idx.perm_ = std::move(perm);
  idx.parts_ = permuted_parts(idx.perm_, k);

  const auto vals = inst.values();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (static_cast<unsigned>(std::popcount(vals[i])) <= params.c1_bits) {
      idx.s1_.push_back(static_cast<std::uint32_t>(i));
      continue;
    }
    for (const auto& part : idx.parts_) {
      total += std::uint64_t{1} << (part.size() - static_cast<unsigned>(std::popcount(vals[i] & part.bits())));
    }
  }
  if (total > params.budget_bits / 32) {
    throw CapacityError("set family needs " + std::to_string(total) + " elements, over the memory budget");
  }

  std::map<std::uint64_t, std::vector<std::uint32_t>> sigma;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (static_cast<unsigned>(std::popcount(vals[i])) <= params.c1_bits) continue;
    for (std::size_t j = 0; j < idx.parts_.size(); ++j) {
      const auto& part = idx.parts_[j];
      const std::uint64_t r = extract_bits(vals[i], part.bits());
      for (std::uint64_t entry : enum_submasks(~r & low_mask(part.size()))) {
        sigma[(std::uint64_t{j} << 32) | entry].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
  SetFamily family;
  family.sets.reserve(sigma.size());
  for (auto& [key, set] : sigma) {
    idx.ids_.emplace(key, static_cast<std::uint32_t>(family.sets.size()));
    family.sets.push_back(std::move(set));  // ascending: indices were visited in order
  }
  idx.sd_ = SdIndex::build(std::move(family), k, params.tau_s, params.table_budget);
  return idx;
}

std::uint32_t SdPartitionedIndex::set_id(std::size_t part, std::uint64_t entry) const {
  const auto it = ids_.find((std::uint64_t{part} << 32) | entry);
  return it == ids_.end() ? SdIndex::kEmptySet : it->second;
}

bool SdPartitionedIndex::query(const BitVec& q, QueryStats* stats, Traversal) const {
  require_same_width(q.width(), inst_.d());
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  const std::uint64_t qv = q.value();
  const auto vals = inst_.values();
  for (std::uint32_t i : s1_) {
    ++st.list_elements_scanned;
    if ((vals[i] & qv) == 0) return st.answer = true;
  }
  std::vector<std::uint32_t> ids(parts_.size());
  for (std::size_t j = 0; j < parts_.size(); ++j) ids[j] = set_id(j, extract_bits(qv, parts_[j].bits()));
  return sd_.query(ids, &st);
}

bool query_via_sd(const SdPartitionedIndex& index, const BitVec& q, QueryStats* stats) {
  return index.query(q, stats);
}

StructureStats SdPartitionedIndex::structure() const {
  StructureStats s = sd_.structure();
  s.list_count += 1;
  s.list_elements += s1_.size();
  return s;
}

void SdPartitionedIndex::save_payload(BinaryWriter& w) const {
  save_vectors(w, inst_);
  std::vector<std::uint32_t> perm(perm_.begin(), perm_.end());
  w.vec_u32(perm);
  w.u32(static_cast<std::uint32_t>(parts_.size()));
  w.vec_u32(s1_);
  w.u64(ids_.size());
  for (const auto& [key, id] : ids_) {
    w.u64(key);
    w.u32(id);
  }
  sd_.save(w);
}

SdPartitionedIndex SdPartitionedIndex::load_payload(BinaryReader& r) {
  SdPartitionedIndex idx(load_vectors(r));
  const auto perm = r.vec_u32();
  idx.perm_.assign(perm.begin(), perm.end());
  const unsigned d = idx.inst_.d();
  {
    std::vector<unsigned> check = idx.perm_;
    std::sort(check.begin(), check.end());
    for (unsigned j = 0; j < check.size(); ++j) {
      if (check[j] != j || check.size() != d) throw ParseError("bad permutation", 0);
    }
  }
  const auto k = r.u32();
  if (k < 2 || k > d) throw ParseError("bad part count", 0);
  idx.parts_ = permuted_parts(idx.perm_, k);
  idx.s1_ = r.vec_u32();
  const auto count = r.u64();
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto key = r.u64();
    idx.ids_.emplace(key, r.u32());
  }
  idx.sd_ = SdIndex::load(r);
  for (const auto& [key, id] : idx.ids_) {
    if (id >= idx.sd_.family().size()) throw ParseError("set id out of range", 0);
  }
  return idx;
}

}  // namespace ovi
