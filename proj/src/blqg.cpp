#include "ovi/blqg.hpp"

#include <bit>
#include <string>

#include "ovi/serialize.hpp"
#include "ovi/tlqg.hpp"

namespace ovi {

BlqgIndex BlqgIndex::build(const Instance& inst, const ParamSet& params) {
  if (params.d != inst.d()) throw ContractError("params planned for a different d");
  const CoordSet w(params.w_mask, inst.d());
  if (w.size() != params.w_bits) throw ContractError("w_mask does not hold w_bits coordinates");
  if (params.x_bits > w.size()) throw ContractError("x_bits exceeds w_bits");

  BlqgIndex idx(inst);
  idx.w_ = w;
  idx.wbar_ = w.complement();
  idx.x_bits_ = params.x_bits;
  const unsigned wb = w.size();
  const unsigned floor = wb - params.x_bits;  // first bottom level

  idx.bottom_ = build_level_bitmaps(inst, w, alphas_by_weight(wb, floor, wb), params.budget_bits);

  const auto vals = inst.values();
  idx.copies_.assign(vals.size(), 0);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const std::uint64_t r = extract_bits(vals[i], w.bits());
    const unsigned omega = static_cast<unsigned>(std::popcount(r));
    if (omega <= params.x_bits) continue;
    const unsigned free = wb - omega;
    std::uint64_t c = 0;
    for (unsigned j = 0; j < floor && j <= free; ++j) c += static_cast<std::uint64_t>(binomial(free, j));
    idx.copies_[i] = c;
    total += c;
  }
  if (total > params.budget_bits / 32) {
    throw CapacityError("upper lists need " + std::to_string(total) + " elements, over the memory budget");
  }

  std::vector<FlatListMap::Entry> pairs;
  pairs.reserve(total);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (idx.copies_[i] == 0) continue;
    const std::uint64_t r = extract_bits(vals[i], w.bits());
    for (std::uint64_t beta : enum_submasks(~r & low_mask(wb))) {
      if (static_cast<unsigned>(std::popcount(beta)) < floor) {
        pairs.emplace_back(beta, static_cast<std::uint32_t>(i));
      }
    }
  }
  FlatListMap full = FlatListMap::from_pairs(std::move(pairs));

  std::vector<std::uint64_t> long_keys;
  for (std::size_t p = 0; p < full.key_count(); ++p) {
    if (full.list_at(p).size() >= params.tau_list) long_keys.push_back(full.key_at(p));
  }
  const std::uint64_t each = std::uint64_t{1} << idx.wbar_.size();
  if (!long_keys.empty() && idx.bottom_.size() + long_keys.size() > params.budget_bits / each) {
    throw CapacityError("long upper-list bitmaps exceed the memory budget");
  }
  std::vector<std::uint64_t> packed;
  for (std::uint64_t key : long_keys) {
    packed.clear();
    for (std::uint32_t i : full.find(key)) packed.push_back(extract_bits(vals[i], idx.wbar_.bits()));
    idx.upper_long_.emplace(key, OrthBitmap::from_restricted(idx.wbar_, packed, params.budget_bits));
  }
  idx.upper_ = full.filtered([&](std::uint64_t key, auto) { return !idx.upper_long_.contains(key); });
  idx.recount();
  return idx;
}

void BlqgIndex::recount() {
  structure_ = {};
  for (const auto* m : {&bottom_, &upper_long_}) {
    for (const auto& [key, bm] : *m) {
      ++structure_.bitmap_count;
      structure_.bitmap_bits += bm.size_bits();
    }
  }
  structure_.list_count = upper_.key_count();
  structure_.list_elements = upper_.element_count();
}

bool BlqgIndex::query(const BitVec& q, QueryStats* stats, Traversal traversal) const {
  require_same_width(q.width(), inst_.d());
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  const std::uint64_t qv = q.value();
  const unsigned wb = w_.size();
  const unsigned floor = wb - x_bits_;
  const std::uint64_t beta = extract_bits(qv, w_.bits());
  const std::uint64_t gamma = extract_bits(qv, wbar_.bits());

  if (static_cast<unsigned>(std::popcount(beta)) >= floor) {
    ++st.nodes_visited;
    ++st.bitmap_lookups;
    st.answer = bottom_.at(beta).test(gamma);
    return st.answer;
  }

  const bool stop_early = traversal == Traversal::first_witness;
  bool found = false;
  ++st.nodes_visited;
  if (auto it = upper_long_.find(beta); it != upper_long_.end()) {
    ++st.bitmap_lookups;
    found = it->second.test(gamma);
  } else {
    const auto vals = inst_.values();
    for (std::uint32_t i : upper_.find(beta)) {
      ++st.list_elements_scanned;
      if ((vals[i] & qv) == 0) {
        found = true;
        if (stop_early) break;
      }
    }
  }
  if (found && stop_early) return st.answer = true;

  for (std::uint64_t alpha : enum_supersets_at_weight(beta, floor, wb)) {
    ++st.boundary_probes;
    ++st.bitmap_lookups;
    if (bottom_.at(alpha).test(gamma)) {
      found = true;
      if (stop_early) break;
    }
  }
  st.answer = found;
  return found;
}

void BlqgIndex::save_payload(BinaryWriter& w) const {
  save_vectors(w, inst_);
  w.u64(w_.bits());
  w.u32(x_bits_);
  save_bitmap_map(w, bottom_);
  upper_.save(w);
  save_bitmap_map(w, upper_long_);
  w.vec_u64(copies_);
}

BlqgIndex BlqgIndex::load_payload(BinaryReader& r) {
  BlqgIndex idx(load_vectors(r));
  idx.w_ = CoordSet(r.u64(), idx.inst_.d());
  idx.wbar_ = idx.w_.complement();
  idx.x_bits_ = r.u32();
  if (idx.x_bits_ > idx.w_.size()) throw ParseError("x_bits exceeds w_bits", 0);
  idx.bottom_ = load_bitmap_map(r);
  idx.upper_ = FlatListMap::load(r);
  idx.upper_long_ = load_bitmap_map(r);
  idx.copies_ = r.vec_u64();
  idx.recount();
  return idx;
}

}  // namespace ovi
