#include "ovi/tlqg.hpp"

#include <bit>
#include <string>

#include "ovi/serialize.hpp"

namespace ovi {

std::vector<std::uint64_t> alphas_by_weight(unsigned w_bits, unsigned lo, unsigned hi) {
  std::vector<std::uint64_t> out;
  for (unsigned j = lo; j <= hi && j <= w_bits; ++j) {
    for (std::uint64_t a : enum_supersets_at_weight(0, j, w_bits)) out.push_back(a);
  }
  return out;
}

std::map<std::uint64_t, OrthBitmap> build_level_bitmaps(const Instance& inst, const CoordSet& w,
                                                        const std::vector<std::uint64_t>& alphas,
                                                        std::uint64_t budget_bits) {
  const CoordSet rest = w.complement();
  check_bitmap_budget(rest.size(), budget_bits);
  const std::uint64_t each = std::uint64_t{1} << rest.size();
  if (!alphas.empty() && alphas.size() > budget_bits / each) {
    throw CapacityError(std::to_string(alphas.size()) + " level bitmaps of " + std::to_string(each) +
                        " bits exceed the budget of " + std::to_string(budget_bits) + " bits");
  }
  const auto vals = inst.values();
  std::vector<std::uint64_t> on_w(vals.size()), off_w(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    on_w[i] = extract_bits(vals[i], w.bits());
    off_w[i] = extract_bits(vals[i], rest.bits());
  }
  std::map<std::uint64_t, OrthBitmap> out;
  std::vector<std::uint64_t> packed;
  packed.reserve(vals.size());
  for (std::uint64_t alpha : alphas) {
    packed.clear();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if ((on_w[i] & alpha) == 0) packed.push_back(off_w[i]);
    }
    out.emplace(alpha, OrthBitmap::from_restricted(rest, packed, budget_bits));
  }
  return out;
}

TlqgIndex TlqgIndex::build(const Instance& inst, const ParamSet& params, TlqgMode mode) {
  if (params.d != inst.d()) throw ContractError("params planned for a different d");
  const CoordSet w(params.w_mask, inst.d());
  if (w.size() != params.w_bits) throw ContractError("w_mask does not hold w_bits coordinates");
  const unsigned x = mode == TlqgMode::random_opt ? params.delta_bits : params.x_bits;
  if (x > w.size()) throw ContractError("x_bits exceeds w_bits");

  TlqgIndex idx(inst);
  idx.mode_ = mode;
  idx.w_ = w;
  idx.wbar_ = w.complement();
  idx.x_bits_ = x;

  ListMap lm = build_list_map(inst, w);
  idx.max_list_length_ = lm.lists.max_list_length();
  if (mode == TlqgMode::random_opt && idx.max_list_length_ > params.ell_max) {
    throw GuardError(idx.max_list_length_, params.ell_max);
  }

  idx.top_ = build_level_bitmaps(inst, w, alphas_by_weight(w.size(), 0, x), params.budget_bits);

  if (mode == TlqgMode::standard) {
    std::vector<std::uint64_t> long_keys;
    for (std::size_t p = 0; p < lm.lists.key_count(); ++p) {
      if (lm.lists.list_at(p).size() >= params.tau_list) long_keys.push_back(lm.lists.key_at(p));
    }
    const std::uint64_t each = std::uint64_t{1} << idx.wbar_.size();
    if (!long_keys.empty() && (idx.top_.size() + long_keys.size()) > params.budget_bits / each) {
      throw CapacityError("long-list bitmaps exceed the memory budget");
    }
    const auto vals = inst.values();
    std::vector<std::uint64_t> packed;
    for (std::uint64_t key : long_keys) {
      packed.clear();
      for (std::uint32_t i : lm.lists.find(key)) packed.push_back(extract_bits(vals[i], idx.wbar_.bits()));
      idx.long_.emplace(key, OrthBitmap::from_restricted(idx.wbar_, packed, params.budget_bits));
    }
    idx.lists_ = lm.lists.filtered([&](std::uint64_t key, auto) { return !idx.long_.contains(key); });
  } else {
    idx.lists_ = std::move(lm.lists);
  }
  idx.recount();
  return idx;
}

void TlqgIndex::recount() {
  structure_ = {};
  for (const auto* m : {&top_, &long_}) {
    for (const auto& [key, bm] : *m) {
      ++structure_.bitmap_count;
      structure_.bitmap_bits += bm.size_bits();
    }
  }
  structure_.list_count = lists_.key_count();
  structure_.list_elements = lists_.element_count();
}

bool TlqgIndex::query(const BitVec& q, QueryStats* stats, Traversal traversal) const {
  require_same_width(q.width(), inst_.d());
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  const std::uint64_t qv = q.value();
  const std::uint64_t beta = extract_bits(qv, w_.bits());
  const std::uint64_t gamma = extract_bits(qv, wbar_.bits());

  if (static_cast<unsigned>(std::popcount(beta)) <= x_bits_) {
    ++st.nodes_visited;
    ++st.bitmap_lookups;
    st.answer = top_.at(beta).test(gamma);
    return st.answer;
  }

  const auto vals = inst_.values();
  bool found = false;
  for (std::uint64_t r : enum_submasks(~beta & low_mask(w_.size()))) {
    ++st.nodes_visited;
    if (auto it = long_.find(r); it != long_.end()) {
      ++st.bitmap_lookups;
      if (it->second.test(gamma)) {
        found = true;
        if (traversal == Traversal::first_witness) break;
      }
      continue;
    }
    for (std::uint32_t i : lists_.find(r)) {
      ++st.list_elements_scanned;
      if ((vals[i] & qv) == 0) {
        found = true;
        if (traversal == Traversal::first_witness) break;
      }
    }
    if (found && traversal == Traversal::first_witness) break;
  }
  st.answer = found;
  return found;
}

void TlqgIndex::save_payload(BinaryWriter& w) const {
  save_vectors(w, inst_);
  w.u8(mode_ == TlqgMode::standard ? 0 : 1);
  w.u64(w_.bits());
  w.u32(x_bits_);
  w.u64(max_list_length_);
  save_bitmap_map(w, top_);
  save_bitmap_map(w, long_);
  lists_.save(w);
}

TlqgIndex TlqgIndex::load_payload(BinaryReader& r) {
  TlqgIndex idx(load_vectors(r));
  idx.mode_ = r.u8() == 0 ? TlqgMode::standard : TlqgMode::random_opt;
  idx.w_ = CoordSet(r.u64(), idx.inst_.d());
  idx.wbar_ = idx.w_.complement();
  idx.x_bits_ = r.u32();
  idx.max_list_length_ = r.u64();
  idx.top_ = load_bitmap_map(r);
  idx.long_ = load_bitmap_map(r);
  idx.lists_ = FlatListMap::load(r);
  idx.recount();
  return idx;
}

}  // namespace ovi
