#include "ovi/reporting.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "ovi/serialize.hpp"
#include "ovi/tlqg.hpp"

namespace ovi {

namespace {

constexpr std::uint64_t kBitClear[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

constexpr std::uint32_t kNone = 0xFFFFFFFFu;

std::size_t word_count(unsigned m) { return m >= 6 ? std::size_t{1} << (m - 6) : 1; }

// Level i from level i+1: positions with bit i clear take both children,
// positions with bit i set take only the child without it.
std::vector<std::uint64_t> parent_level(const std::vector<std::uint64_t>& child, unsigned i) {
  std::vector<std::uint64_t> out(child.size());
  if (i < 6) {
    const unsigned sh = 1u << i;
    const std::uint64_t clear = kBitClear[i];
    for (std::size_t k = 0; k < child.size(); ++k) {
      const std::uint64_t a = child[k];
      out[k] = ((a | (a >> sh)) & clear) | ((a << sh) & ~clear);
    }
  } else {
    const std::size_t stride = std::size_t{1} << (i - 6);
    for (std::size_t base = 0; base < child.size(); base += 2 * stride) {
      for (std::size_t k = 0; k < stride; ++k) {
        out[base + k] = child[base + k] | child[base + stride + k];
        out[base + stride + k] = child[base + k];
      }
    }
  }
  return out;
}

void sort_ids(std::vector<std::uint32_t>& out) { std::sort(out.begin(), out.end()); }

}  // namespace

std::uint64_t OrthTree::count_ones() const noexcept {
  std::uint64_t c = 0;
  for (const auto& lvl : levels_) {
    for (auto w : lvl) c += static_cast<std::uint64_t>(std::popcount(w));
  }
  return c;
}

OrthTree build_orth_tree(std::span<const std::uint64_t> packed, unsigned m,
                         std::span<const std::uint32_t> ids, std::uint64_t budget_bits) {
  check_bitmap_budget(m, budget_bits);
  if (static_cast<std::uint64_t>(m + 1) > budget_bits >> m) {
    throw CapacityError("tree over " + std::to_string(m) + " coordinates needs " + std::to_string(m + 1) +
                        " * 2^" + std::to_string(m) + " bits, over the budget");
  }
  if (!ids.empty() && ids.size() != packed.size()) throw ContractError("ids and candidates differ in length");
  const std::uint64_t full = low_mask(m);

  OrthTree t;
  t.m_ = m;
  t.levels_.resize(m + 1);
  std::vector<std::uint64_t> leaf(word_count(m), 0);
  std::vector<FlatListMap::Entry> pairs;
  pairs.reserve(packed.size());
  for (std::size_t k = 0; k < packed.size(); ++k) {
    const std::uint64_t v = packed[k];
    if (v & ~full) throw ContractError("candidate wider than the tree");
    leaf[v >> 6] |= std::uint64_t{1} << (v & 63);
    pairs.emplace_back(v, ids.empty() ? static_cast<std::uint32_t>(k) : ids[k]);
  }
  t.leaves_ = FlatListMap::from_pairs(std::move(pairs));
  t.levels_[m] = std::move(leaf);
  for (unsigned i = m; i-- > 0;) t.levels_[i] = parent_level(t.levels_[i + 1], i);
  return t;
}

OrthTree build_orth_tree(const Instance& inst, std::uint64_t budget_bits) {
  return build_orth_tree(inst.values(), inst.d(), {}, budget_bits);
}

std::vector<std::uint32_t> report_tree(const OrthTree& tree, std::uint64_t q, QueryStats* stats) {
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  std::vector<std::uint32_t> out;
  const unsigned m = tree.depth();
  ++st.nodes_visited;
  if (!tree.test(0, q)) {
    st.answer = false;
    return out;
  }
  struct Frame {
    unsigned level;
    std::uint64_t pos;
  };
  std::vector<Frame> stack{{0, q}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.level == m) {
      const auto ids = tree.leaf(f.pos);
      out.insert(out.end(), ids.begin(), ids.end());
      continue;
    }
    const std::uint64_t bit = std::uint64_t{1} << f.level;
    const std::uint64_t c0 = f.pos & ~bit;
    ++st.nodes_visited;
    if (tree.test(f.level + 1, c0)) stack.push_back({f.level + 1, c0});
    if (!(f.pos & bit)) {
      const std::uint64_t c1 = f.pos | bit;
      ++st.nodes_visited;
      if (tree.test(f.level + 1, c1)) stack.push_back({f.level + 1, c1});
    }
  }
  sort_ids(out);
  st.answer = !out.empty();
  return out;
}

std::vector<std::uint32_t> report_tree(const OrthTree& tree, const BitVec& q, QueryStats* stats) {
  require_same_width(q.width(), tree.depth());
  return report_tree(tree, q.value(), stats);
}

void CompressedOrthDAG::build_rank() {
  const auto& words = root_.words();
  rank_.assign(words.size(), 0);
  std::uint32_t acc = 0;
  for (std::size_t k = 0; k < words.size(); ++k) {
    rank_[k] = acc;
    acc += static_cast<std::uint32_t>(std::popcount(words[k]));
  }
  if (acc != entries_.size()) throw ParseError("DAG entry count does not match the root bitmap", 0);
}

std::uint32_t CompressedOrthDAG::entry(std::uint64_t q) const noexcept {
  const std::uint64_t word = root_.words()[q >> 6];
  const std::uint64_t below = word & ((std::uint64_t{1} << (q & 63)) - 1);
  return entries_[rank_[q >> 6] + static_cast<std::uint32_t>(std::popcount(below))];
}

StructureStats CompressedOrthDAG::structure() const {
  StructureStats s;
  s.bitmap_count = 1;
  s.bitmap_bits = root_.size_bits();
  s.node_count = node_count();
  s.edge_count = edges_;
  s.table_entries = 32 * entries_.size();
  return s;
}

CompressedOrthDAG compress_tree(const OrthTree& tree) {
  const unsigned m = tree.depth();
  const std::size_t size = std::size_t{1} << m;
  CompressedOrthDAG dag;
  dag.leaves_ = tree.leaves();

  // target of every 1-bit at the level below the one being processed
  std::vector<std::uint32_t> below(size, kNone);
  for (std::size_t p = 0; p < tree.leaves().key_count(); ++p) {
    const std::uint64_t v = tree.leaves().key_at(p);
    below[v] = static_cast<std::uint32_t>(dag.left_.size());
    dag.left_.push_back(CompressedOrthDAG::kLeafTag);
    dag.right_.push_back(CompressedOrthDAG::kLeafTag);
    dag.value_.push_back(v);
  }
  std::vector<std::uint32_t> here(size, kNone);
  for (unsigned i = m; i-- > 0;) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    const auto& words = tree.level_words(i);
    std::fill(here.begin(), here.end(), kNone);
    for (std::size_t k = 0; k < words.size(); ++k) {
      for (std::uint64_t w = words[k]; w; w &= w - 1) {
        const std::uint64_t pos = (k << 6) | static_cast<std::uint64_t>(std::countr_zero(w));
        if (pos >= size) break;
        const std::uint64_t c0 = pos & ~bit;
        if (pos & bit) {
          here[pos] = below[c0];
          continue;
        }
        const std::uint64_t c1 = pos | bit;
        const std::uint32_t t0 = below[c0];
        const std::uint32_t t1 = below[c1];
        if (t0 != kNone && t1 != kNone) {
          here[pos] = static_cast<std::uint32_t>(dag.left_.size());
          dag.left_.push_back(t0);
          dag.right_.push_back(t1);
          dag.value_.push_back(0);
          dag.edges_ += 2;
        } else {
          here[pos] = t0 != kNone ? t0 : t1;
        }
      }
    }
    std::swap(here, below);
  }

  std::vector<std::uint64_t> root_words = tree.level_words(0);
  std::vector<std::uint64_t> packed;
  for (std::size_t k = 0; k < root_words.size(); ++k) {
    for (std::uint64_t w = root_words[k]; w; w &= w - 1) {
      const std::uint64_t pos = (k << 6) | static_cast<std::uint64_t>(std::countr_zero(w));
      if (pos >= size) break;
      dag.entries_.push_back(below[pos]);
    }
  }
  // The root bitmap is the lookup bitmap over the leaf values.
  for (std::size_t p = 0; p < tree.leaves().key_count(); ++p) packed.push_back(tree.leaves().key_at(p));
  dag.root_ = OrthBitmap::from_restricted(CoordSet::all(m), packed);
  dag.build_rank();
  return dag;
}

std::vector<std::uint32_t> report_compressed(const CompressedOrthDAG& dag, std::uint64_t q,
                                             QueryStats* stats) {
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  std::vector<std::uint32_t> out;
  ++st.bitmap_lookups;
  if (!dag.root().test(q)) {
    st.answer = false;
    return out;
  }
  std::vector<std::uint32_t> stack{dag.entry(q)};
  while (!stack.empty()) {
    const std::uint32_t node = stack.back();
    stack.pop_back();
    ++st.nodes_visited;
    if (dag.is_leaf(node)) {
      const auto ids = dag.leaf_ids(node);
      out.insert(out.end(), ids.begin(), ids.end());
    } else {
      stack.push_back(dag.right(node));
      stack.push_back(dag.left(node));
    }
  }
  sort_ids(out);
  st.answer = !out.empty();
  return out;
}

std::vector<std::uint32_t> report_compressed(const CompressedOrthDAG& dag, const BitVec& q,
                                             QueryStats* stats) {
  require_same_width(q.width(), dag.depth());
  return report_compressed(dag, q.value(), stats);
}

void CompressedOrthDAG::save(BinaryWriter& w) const {
  root_.save(w);
  w.vec_u32(entries_);
  w.vec_u32(left_);
  w.vec_u32(right_);
  w.vec_u64(value_);
  leaves_.save(w);
}

CompressedOrthDAG CompressedOrthDAG::load(BinaryReader& r) {
  CompressedOrthDAG dag;
  dag.root_ = OrthBitmap::load(r);
  dag.entries_ = r.vec_u32();
  dag.left_ = r.vec_u32();
  dag.right_ = r.vec_u32();
  dag.value_ = r.vec_u64();
  dag.leaves_ = FlatListMap::load(r);
  const std::size_t n = dag.left_.size();
  if (dag.right_.size() != n || dag.value_.size() != n) throw ParseError("DAG node arrays differ in length", 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (dag.left_[k] == kLeafTag) continue;
    // Children are always created before their parent.
    if (dag.left_[k] >= k || dag.right_[k] >= k) throw ParseError("DAG edge out of order", 0);
    dag.edges_ += 2;
  }
  for (std::uint32_t e : dag.entries_) {
    if (e >= n) throw ParseError("DAG entry out of range", 0);
  }
  dag.build_rank();
  return dag;
}

namespace {

CompressedOrthDAG dag_over(const Instance& inst, const CoordSet& rest, std::span<const std::uint32_t> ids,
                           std::uint64_t budget_bits) {
  const auto vals = inst.values();
  std::vector<std::uint64_t> packed;
  packed.reserve(ids.size());
  for (std::uint32_t i : ids) packed.push_back(extract_bits(vals[i], rest.bits()));
  return compress_tree(build_orth_tree(packed, rest.size(), ids, budget_bits));
}

void save_dag_map(BinaryWriter& w, const std::map<std::uint64_t, CompressedOrthDAG>& m) {
  w.u64(m.size());
  for (const auto& [key, dag] : m) {
    w.u64(key);
    dag.save(w);
  }
}

std::map<std::uint64_t, CompressedOrthDAG> load_dag_map(BinaryReader& r) {
  std::map<std::uint64_t, CompressedOrthDAG> m;
  const auto count = r.u64();
  for (std::uint64_t k = 0; k < count; ++k) {
    const auto key = r.u64();
    m.emplace_hint(m.end(), key, CompressedOrthDAG::load(r));
  }
  return m;
}

}  // namespace

TlqgReporter TlqgReporter::build(const Instance& inst, const ParamSet& params) {
  if (params.d != inst.d()) throw ContractError("params planned for a different d");
  const CoordSet w(params.w_mask, inst.d());
  if (w.size() != params.w_bits) throw ContractError("w_mask does not hold w_bits coordinates");
  if (params.x_bits > w.size()) throw ContractError("x_bits exceeds w_bits");

  TlqgReporter idx(inst);
  idx.w_ = w;
  idx.wbar_ = w.complement();
  idx.x_bits_ = params.x_bits;

  const auto vals = inst.values();
  std::vector<std::uint32_t> ids;
  for (std::uint64_t alpha : alphas_by_weight(w.size(), 0, params.x_bits)) {
    ids.clear();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if ((extract_bits(vals[i], w.bits()) & alpha) == 0) ids.push_back(static_cast<std::uint32_t>(i));
    }
    idx.top_.emplace(alpha, dag_over(inst, idx.wbar_, ids, params.budget_bits));
  }
  ListMap lm = build_list_map(inst, w);
  for (std::size_t p = 0; p < lm.lists.key_count(); ++p) {
    const auto list = lm.lists.list_at(p);
    if (list.size() >= params.tau_list) {
      idx.long_.emplace(lm.lists.key_at(p), dag_over(inst, idx.wbar_, list, params.budget_bits));
    }
  }
  idx.lists_ = std::move(lm.lists);
  idx.recount();
  if (idx.structure_.total_bits() > params.budget_bits) {
    throw CapacityError("reporting structure needs " + std::to_string(idx.structure_.total_bits()) +
                        " bits, over the budget");
  }
  return idx;
}

void TlqgReporter::recount() {
  structure_ = {};
  for (const auto* m : {&top_, &long_}) {
    for (const auto& [key, dag] : *m) structure_ += dag.structure();
  }
  structure_.list_count = lists_.key_count();
  structure_.list_elements = lists_.element_count();
}

bool TlqgReporter::query(const BitVec& q, QueryStats* stats, Traversal traversal) const {
  require_same_width(q.width(), inst_.d());
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  const std::uint64_t qv = q.value();
  const std::uint64_t beta = extract_bits(qv, w_.bits());
  const std::uint64_t gamma = extract_bits(qv, wbar_.bits());
  if (static_cast<unsigned>(std::popcount(beta)) <= x_bits_) {
    ++st.nodes_visited;
    ++st.bitmap_lookups;
    return st.answer = top_.at(beta).root().test(gamma);
  }
  const auto vals = inst_.values();
  bool found = false;
  for (std::uint64_t r : enum_submasks(~beta & low_mask(w_.size()))) {
    ++st.nodes_visited;
    if (auto it = long_.find(r); it != long_.end()) {
      ++st.bitmap_lookups;
      if (it->second.root().test(gamma)) found = true;
    } else {
      for (std::uint32_t i : lists_.find(r)) {
        ++st.list_elements_scanned;
        if ((vals[i] & qv) == 0) {
          found = true;
          break;
        }
      }
    }
    if (found && traversal == Traversal::first_witness) break;
  }
  return st.answer = found;
}

std::vector<std::vector<std::uint32_t>> TlqgReporter::report_by_node(const BitVec& q) const {
  require_same_width(q.width(), inst_.d());
  const std::uint64_t qv = q.value();
  const std::uint64_t beta = extract_bits(qv, w_.bits());
  const std::uint64_t gamma = extract_bits(qv, wbar_.bits());
  std::vector<std::vector<std::uint32_t>> parts;
  if (static_cast<unsigned>(std::popcount(beta)) <= x_bits_) {
    parts.push_back(report_compressed(top_.at(beta), gamma));
    return parts;
  }
  const auto vals = inst_.values();
  for (std::uint64_t r : enum_submasks(~beta & low_mask(w_.size()))) {
    if (auto it = long_.find(r); it != long_.end()) {
      parts.push_back(report_compressed(it->second, gamma));
      continue;
    }
    std::vector<std::uint32_t> part;
    for (std::uint32_t i : lists_.find(r)) {
      if ((vals[i] & qv) == 0) part.push_back(i);
    }
    if (!part.empty()) parts.push_back(std::move(part));
  }
  return parts;
}

std::vector<std::uint32_t> TlqgReporter::report(const BitVec& q, QueryStats* stats) const {
  require_same_width(q.width(), inst_.d());
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  const std::uint64_t qv = q.value();
  const std::uint64_t beta = extract_bits(qv, w_.bits());
  const std::uint64_t gamma = extract_bits(qv, wbar_.bits());
  if (static_cast<unsigned>(std::popcount(beta)) <= x_bits_) {
    return report_compressed(top_.at(beta), gamma, &st);
  }
  const auto vals = inst_.values();
  std::vector<std::uint32_t> out;
  for (std::uint64_t r : enum_submasks(~beta & low_mask(w_.size()))) {
    ++st.nodes_visited;
    if (auto it = long_.find(r); it != long_.end()) {
      QueryStats sub;
      const auto part = report_compressed(it->second, gamma, &sub);
      st.bitmap_lookups += sub.bitmap_lookups;
      st.nodes_visited += sub.nodes_visited;
      out.insert(out.end(), part.begin(), part.end());
      continue;
    }
    for (std::uint32_t i : lists_.find(r)) {
      ++st.list_elements_scanned;
      if ((vals[i] & qv) == 0) out.push_back(i);
    }
  }
  sort_ids(out);
  st.answer = !out.empty();
  return out;
}

std::vector<std::uint32_t> report_tlqg(const TlqgReporter& index, const BitVec& q, QueryStats* stats) {
  return index.report(q, stats);
}

void TlqgReporter::save_payload(BinaryWriter& w) const {
  save_vectors(w, inst_);
  w.u64(w_.bits());
  w.u32(x_bits_);
  save_dag_map(w, top_);
  save_dag_map(w, long_);
  lists_.save(w);
}

TlqgReporter TlqgReporter::load_payload(BinaryReader& r) {
  TlqgReporter idx(load_vectors(r));
  idx.w_ = CoordSet(r.u64(), idx.inst_.d());
  idx.wbar_ = idx.w_.complement();
  idx.x_bits_ = r.u32();
  idx.top_ = load_dag_map(r);
  idx.long_ = load_dag_map(r);
  idx.lists_ = FlatListMap::load(r);
  idx.recount();
  return idx;
}

}  // namespace ovi
