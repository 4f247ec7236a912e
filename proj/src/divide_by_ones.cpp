#include "ovi/divide_by_ones.hpp"

#include <bit>
#include <string>

#include "ovi/query_graph.hpp"
#include "ovi/serialize.hpp"

namespace ovi {

std::vector<PartLayout> layout_parts(unsigned d, unsigned part_bits, LayoutMode mode,
                                     unsigned eps_bits, std::uint64_t max_layouts) {
  if (part_bits == 0 || part_bits > d) throw ContractError("part_bits must be in [1, d]");
  std::vector<PartLayout> out;
  if (mode == LayoutMode::divisible) {
    PartLayout layout;
    std::uint64_t covered = 0;
    const unsigned count = d / part_bits;
    for (unsigned j = 0; j < count; ++j) {
      layout.parts.push_back(CoordSet::range(j * part_bits, (j + 1) * part_bits, d));
      covered |= layout.parts.back().bits();
    }
    layout.ignored = CoordSet(~covered & low_mask(d), d);
    out.push_back(std::move(layout));
    return out;
  }

  if (eps_bits == 0 || eps_bits > part_bits) throw ContractError("eps_bits must be in [1, part_bits]");
  const unsigned m1 = d / eps_bits;
  const unsigned m2 = part_bits / eps_bits;
  const double m3 = binomial(m1, m2);
  if (m3 > static_cast<double>(max_layouts)) {
    throw CapacityError("epsilon layout count C(" + std::to_string(m1) + "," + std::to_string(m2) +
                        ") exceeds the cap of " + std::to_string(max_layouts) + "; use larger eps_bits");
  }
  // Lexicographic m2-subsets of the m1 blocks.
  std::vector<unsigned> pick(m2);
  for (unsigned i = 0; i < m2; ++i) pick[i] = i;
  while (true) {
    std::uint64_t mask = 0;
    for (unsigned b : pick) mask |= CoordSet::range(b * eps_bits, (b + 1) * eps_bits, d).bits();
    out.push_back(PartLayout{{CoordSet(mask, d)}, CoordSet(~mask & low_mask(d), d)});
    int i = static_cast<int>(m2) - 1;
    while (i >= 0 && pick[i] == m1 - m2 + static_cast<unsigned>(i)) --i;
    if (i < 0) break;
    ++pick[i];
    for (unsigned j = static_cast<unsigned>(i) + 1; j < m2; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

DboIndex DboIndex::build(const Instance& inst, const ParamSet& params) {
  const unsigned d = inst.d();
  if (params.d != d) throw ContractError("params planned for a different d");
  DboIndex idx(inst);

  const auto layouts = params.eps_bits == 0
                           ? layout_parts(d, params.part_bits, LayoutMode::divisible)
                           : layout_parts(d, params.part_bits, LayoutMode::epsilon_blocks, params.eps_bits);
  if (params.eps_bits == 0) {
    idx.parts_ = layouts.front().parts;
  } else {
    for (const auto& l : layouts) idx.parts_.push_back(l.parts.front());
  }
  const std::size_t nparts = idx.parts_.size();
  std::uint64_t covered = 0;
  for (const auto& p : idx.parts_) covered |= p.bits();

  const auto vals = inst.values();
  idx.designated_.assign(vals.size(), kInS1);
  idx.entries_per_vector_.assign(vals.size(), 0);

  // Designation first, so the size check happens before any allocation.
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const std::uint64_t v = vals[i];
    if (static_cast<unsigned>(std::popcount(v)) <= params.c1_bits) {
      idx.s1_.push_back(static_cast<std::uint32_t>(i));
      continue;
    }
    unsigned best = 0;
    int best_ones = -1;
    for (std::size_t j = 0; j < nparts; ++j) {
      const int ones = std::popcount(v & idx.parts_[j].bits());
      if (ones > best_ones) {
        best_ones = ones;
        best = static_cast<unsigned>(j);
      }
    }
    if (params.eps_bits == 0) {
      const unsigned covered_ones = static_cast<unsigned>(std::popcount(v & covered));
      if (static_cast<unsigned>(best_ones) * nparts < covered_ones) {
        throw Error("designated part holds fewer than its share of ones");
      }
    }
    idx.designated_[i] = best;
    const unsigned zeros = idx.parts_[best].size() - static_cast<unsigned>(best_ones);
    idx.entries_per_vector_[i] = std::uint64_t{1} << zeros;
    total += idx.entries_per_vector_[i];
  }
  idx.elements_before_pruning_ = total;
  if (total > params.budget_bits / 32) {
    throw CapacityError("DivideByOnes arrays need " + std::to_string(total) +
                        " list elements, over the memory budget");
  }

  std::vector<std::vector<FlatListMap::Entry>> pairs(nparts);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (idx.designated_[i] == kInS1) continue;
    const unsigned j = idx.designated_[i];
    const CoordSet& part = idx.parts_[j];
    const std::uint64_t r = extract_bits(vals[i], part.bits());
    for (std::uint64_t entry : enum_submasks(~r & low_mask(part.size()))) {
      pairs[j].emplace_back(entry, static_cast<std::uint32_t>(i));
    }
  }

  idx.arrays_.resize(nparts);
  idx.long_entries_.resize(nparts);
  for (std::size_t j = 0; j < nparts; ++j) {
    FlatListMap full = FlatListMap::from_pairs(std::move(pairs[j]));
    const CoordSet& part = idx.parts_[j];
    const CoordSet rest = part.complement();
    std::vector<std::uint64_t> long_keys;
    for (std::size_t p = 0; p < full.key_count(); ++p) {
      if (full.list_at(p).size() >= params.tau_entry) long_keys.push_back(full.key_at(p));
    }
    if (!long_keys.empty()) {
      check_bitmap_budget(rest.size(), params.budget_bits);
      const std::uint64_t need = long_keys.size() * (std::uint64_t{1} << rest.size());
      if (need > params.budget_bits) {
        throw CapacityError("long-entry bitmaps need " + std::to_string(need) + " bits, over the budget");
      }
    }
    std::vector<std::uint64_t> packed;
    for (std::uint64_t key : long_keys) {
      packed.clear();
      for (std::uint64_t v : vals) {
        if ((extract_bits(v, part.bits()) & key) == 0) packed.push_back(extract_bits(v, rest.bits()));
      }
      idx.long_entries_[j].emplace(key, OrthBitmap::from_restricted(rest, packed, params.budget_bits));
    }
    const auto& longs = idx.long_entries_[j];
    idx.arrays_[j] = full.filtered([&](std::uint64_t key, auto) { return !longs.contains(key); });

    idx.structure_.list_count += idx.arrays_[j].key_count();
    idx.structure_.list_elements += idx.arrays_[j].element_count();
    for (const auto& [key, bm] : longs) {
      ++idx.structure_.bitmap_count;
      idx.structure_.bitmap_bits += bm.size_bits();
    }
  }
  idx.structure_.list_count += 1;
  idx.structure_.list_elements += idx.s1_.size();
  return idx;
}

bool DboIndex::query(const BitVec& q, QueryStats* stats, Traversal traversal) const {
  require_same_width(q.width(), inst_.d());
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  const std::uint64_t qv = q.value();

  std::vector<std::uint64_t> entry(parts_.size());
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    entry[j] = extract_bits(qv, parts_[j].bits());
    const auto& longs = long_entries_[j];
    if (auto it = longs.find(entry[j]); it != longs.end()) {
      ++st.bitmap_lookups;
      ++st.nodes_visited;
      st.answer = it->second.test(extract_bits(qv, it->second.coords().bits()));
      return st.answer;
    }
  }

  const auto vals = inst_.values();
  bool found = false;
  auto scan = [&](std::span<const std::uint32_t> list) {
    for (std::uint32_t i : list) {
      ++st.list_elements_scanned;
      if ((vals[i] & qv) == 0) {
        found = true;
        if (traversal == Traversal::first_witness) return true;
      }
    }
    return false;
  };
  if (scan(s1_)) return st.answer = true;
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    ++st.nodes_visited;
    if (scan(arrays_[j].find(entry[j]))) return st.answer = true;
  }
  st.answer = found;
  return found;
}

void DboIndex::save_payload(BinaryWriter& w) const {
  save_vectors(w, inst_);
  w.u64(parts_.size());
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    w.u64(parts_[j].bits());
    arrays_[j].save(w);
    w.u64(long_entries_[j].size());
    for (const auto& [key, bm] : long_entries_[j]) {
      w.u64(key);
      bm.save(w);
    }
  }
  w.vec_u32(s1_);
  w.vec_u32(designated_);
  w.vec_u64(entries_per_vector_);
  w.u64(elements_before_pruning_);
}

DboIndex DboIndex::load_payload(BinaryReader& r) {
  DboIndex idx(load_vectors(r));
  const unsigned d = idx.inst_.d();
  const auto nparts = r.u64();
  if (nparts > 1u << 16) throw ParseError("implausible part count", 0);
  for (std::uint64_t j = 0; j < nparts; ++j) {
    idx.parts_.emplace_back(r.u64(), d);
    idx.arrays_.push_back(FlatListMap::load(r));
    idx.long_entries_.emplace_back();
    const auto nlong = r.u64();
    for (std::uint64_t k = 0; k < nlong; ++k) {
      const auto key = r.u64();
      idx.long_entries_.back().emplace(key, OrthBitmap::load(r));
    }
    idx.structure_.list_count += idx.arrays_.back().key_count();
    idx.structure_.list_elements += idx.arrays_.back().element_count();
    for (const auto& [key, bm] : idx.long_entries_.back()) {
      ++idx.structure_.bitmap_count;
      idx.structure_.bitmap_bits += bm.size_bits();
    }
  }
  idx.s1_ = r.vec_u32();
  idx.designated_ = r.vec_u32();
  idx.entries_per_vector_ = r.vec_u64();
  idx.elements_before_pruning_ = r.u64();
  idx.structure_.list_count += 1;
  idx.structure_.list_elements += idx.s1_.size();
  return idx;
}

}  // namespace ovi
