#include "ovi/combined.hpp"

#include <bit>
#include <string>

#include "ovi/serialize.hpp"
#include "ovi/tlqg.hpp"

namespace ovi {

CombinedIndex CombinedIndex::build(const Instance& inst, const ParamSet& params) {
  if (params.d != inst.d()) throw ContractError("params planned for a different d");
  const CoordSet w(params.w_mask, inst.d());
  if (w.size() != params.w_bits) throw ContractError("w_mask does not hold w_bits coordinates");
  if (2 * params.x_bits >= w.size()) {
    throw PlanningError("combined index needs 2*x_bits < w_bits (x_bits=" + std::to_string(params.x_bits) +
                        ", w_bits=" + std::to_string(w.size()) + ")");
  }
  if (params.tau_list == 0) throw ContractError("tau_mid must be at least 1");

  CombinedIndex idx(inst);
  idx.w_ = w;
  idx.wbar_ = w.complement();
  idx.x_bits_ = params.x_bits;
  idx.tau_mid_ = params.tau_list;
  const unsigned wb = w.size();

  idx.top_ = build_level_bitmaps(inst, w, alphas_by_weight(wb, 0, params.x_bits), params.budget_bits);
  idx.bottom_ =
      build_level_bitmaps(inst, w, alphas_by_weight(wb, wb - params.x_bits, wb), params.budget_bits);

  const unsigned x = params.x_bits;
  ListMap lm = build_list_map(inst, w);
  FlatListMap band = lm.lists.filtered(
      [x](std::uint64_t key, auto) { return static_cast<unsigned>(std::popcount(key)) > x; });

  std::vector<std::uint64_t> long_keys;
  for (std::size_t p = 0; p < band.key_count(); ++p) {
    if (band.list_at(p).size() >= idx.tau_mid_) long_keys.push_back(band.key_at(p));
  }
  const std::uint64_t each = std::uint64_t{1} << idx.wbar_.size();
  if (!long_keys.empty() &&
      idx.top_.size() + idx.bottom_.size() + long_keys.size() > params.budget_bits / each) {
    throw CapacityError("middle-list bitmaps exceed the memory budget");
  }
  const auto vals = inst.values();
  std::vector<std::uint64_t> packed;
  for (std::uint64_t key : long_keys) {
    packed.clear();
    for (std::uint32_t i : band.find(key)) packed.push_back(extract_bits(vals[i], idx.wbar_.bits()));
    idx.middle_long_.emplace(key, OrthBitmap::from_restricted(idx.wbar_, packed, params.budget_bits));
  }
  idx.middle_ = band.filtered([&](std::uint64_t key, auto) { return !idx.middle_long_.contains(key); });
  idx.recount();
  return idx;
}

void CombinedIndex::recount() {
  structure_ = {};
  for (const auto* m : {&top_, &bottom_, &middle_long_}) {
    for (const auto& [key, bm] : *m) {
      ++structure_.bitmap_count;
      structure_.bitmap_bits += bm.size_bits();
    }
  }
  structure_.list_count = middle_.key_count();
  structure_.list_elements = middle_.element_count();
}

bool CombinedIndex::query(const BitVec& q, QueryStats* stats, Traversal traversal) const {
  require_same_width(q.width(), inst_.d());
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  const std::uint64_t qv = q.value();
  const unsigned wb = w_.size();
  const unsigned floor = wb - x_bits_;
  const std::uint64_t beta = extract_bits(qv, w_.bits());
  const std::uint64_t gamma = extract_bits(qv, wbar_.bits());
  const unsigned weight = static_cast<unsigned>(std::popcount(beta));

  if (weight <= x_bits_ || weight >= floor) {
    ++st.nodes_visited;
    ++st.bitmap_lookups;
    st.answer = (weight <= x_bits_ ? top_ : bottom_).at(beta).test(gamma);
    return st.answer;
  }

  const bool stop_early = traversal == Traversal::first_witness;
  const auto vals = inst_.values();
  bool found = false;
  for (std::uint64_t r : enum_submasks(~beta & low_mask(wb))) {
    if (static_cast<unsigned>(std::popcount(r)) <= x_bits_) continue;
    ++st.nodes_visited;
    if (auto it = middle_long_.find(r); it != middle_long_.end()) {
      ++st.bitmap_lookups;
      if (it->second.test(gamma)) found = true;
    } else {
      for (std::uint32_t i : middle_.find(r)) {
        ++st.list_elements_scanned;
        if ((vals[i] & qv) == 0) {
          found = true;
          if (stop_early) break;
        }
      }
    }
    if (found && stop_early) return st.answer = true;
  }

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

void CombinedIndex::save_payload(BinaryWriter& w) const {
  save_vectors(w, inst_);
  w.u64(w_.bits());
  w.u32(x_bits_);
  w.u64(tau_mid_);
  save_bitmap_map(w, top_);
  save_bitmap_map(w, bottom_);
  middle_.save(w);
  save_bitmap_map(w, middle_long_);
}

CombinedIndex CombinedIndex::load_payload(BinaryReader& r) {
  CombinedIndex idx(load_vectors(r));
  idx.w_ = CoordSet(r.u64(), idx.inst_.d());
  idx.wbar_ = idx.w_.complement();
  idx.x_bits_ = r.u32();
  if (2 * idx.x_bits_ >= idx.w_.size()) throw ParseError("x_bits out of range for w_bits", 0);
  idx.tau_mid_ = r.u64();
  idx.top_ = load_bitmap_map(r);
  idx.bottom_ = load_bitmap_map(r);
  idx.middle_ = FlatListMap::load(r);
  idx.middle_long_ = load_bitmap_map(r);
  idx.recount();
  return idx;
}

}  // namespace ovi
