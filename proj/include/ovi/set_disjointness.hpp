#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ovi/index.hpp"
#include "ovi/planner.hpp"

namespace ovi {

/// Sets of input-vector indices, each sorted and duplicate-free.
struct SetFamily {
  std::vector<std::vector<std::uint32_t>> sets;

  std::size_t size() const noexcept { return sets.size(); }
  /// Total number of elements over all sets.
  std::uint64_t total() const noexcept;
  /// Throws ContractError unless every set is sorted, duplicate-free and
  /// below `universe`.
  void check(std::uint64_t universe) const;
};

/// One set per line, ids separated by single spaces; an empty set is an empty line.
void write_family(const SetFamily& family, std::ostream& out);
SetFamily read_family(std::istream& in);

struct FamilyStats {
  std::uint64_t total = 0;
  std::size_t set_count = 0;
  std::map<std::size_t, std::size_t> size_histogram;  // set size -> number of sets
  std::uint64_t max_duplication = 0;                  // most sets holding one element
  std::unordered_map<std::uint32_t, std::uint64_t> duplication;
};

FamilyStats measure_family(const SetFamily& family);

/// k-wise intersection emptiness with the answers for tuples of heavy sets
/// (size above tau_s) precomputed. Any other tuple scans its smallest light
/// set and probes the rest.
class SdIndex {
 public:
  /// Set id that stands for the empty set without being stored.
  static constexpr std::uint32_t kEmptySet = 0xFFFFFFFFu;

  SdIndex() = default;
  /// Throws CapacityError when the heavy table would exceed `table_budget` entries.
  static SdIndex build(SetFamily family, unsigned k, std::uint64_t tau_s,
                       std::uint64_t table_budget = std::uint64_t{1} << 26);

  /// True iff the named sets share an element. An empty tuple is true.
  /// membership_probes counts element lookups in other sets.
  bool query(std::span<const std::uint32_t> ids, QueryStats* stats = nullptr) const;

  const SetFamily& family() const noexcept { return family_; }
  unsigned k() const noexcept { return k_; }
  std::uint64_t tau_s() const noexcept { return tau_s_; }
  const std::vector<std::uint32_t>& heavy_ids() const noexcept { return heavy_; }
  std::size_t table_size() const noexcept { return table_.size(); }
  bool is_heavy(std::uint32_t id) const noexcept { return heavy_rank_[id] != kEmptySet; }
  StructureStats structure() const;

  void save(BinaryWriter& w) const;
  static SdIndex load(BinaryReader& r);

 private:
  void index_members();
  std::uint64_t tuple_key(std::span<const std::uint32_t> sorted_ids) const;
  bool member(std::uint32_t id, std::uint32_t elem) const {
    return members_.contains((std::uint64_t{id} << 32) | elem);
  }

  SetFamily family_;
  unsigned k_ = 2;
  std::uint64_t tau_s_ = 1;
  std::vector<std::uint32_t> heavy_;
  std::vector<std::uint32_t> heavy_rank_;
  unsigned rank_bits_ = 1;
  std::unordered_map<std::uint64_t, bool> table_;
  std::unordered_set<std::uint64_t> members_;
};

bool sd_query(const SdIndex& index, std::span<const std::uint32_t> ids, QueryStats* stats = nullptr);

/// Set i holds the vectors with a 0 at coordinate i; a query intersects the
/// sets at its 1-coordinates. The heavy table covers pairs; tuples of any
/// other arity scan their smallest light set.
class SdSimpleIndex final : public OvIndex {
 public:
  static SdSimpleIndex build(const Instance& inst, const ParamSet& params);

  std::string_view algo() const override { return "sd_simple"; }
  unsigned d() const override { return d_; }
  bool query(const BitVec& q, QueryStats* stats = nullptr,
             Traversal traversal = Traversal::first_witness) const override;
  StructureStats structure() const override { return sd_.structure(); }
  void save_payload(BinaryWriter& w) const override;
  static SdSimpleIndex load_payload(BinaryReader& r);

  const SdIndex& sd() const noexcept { return sd_; }

 private:
  SdSimpleIndex() = default;
  unsigned d_ = 0;
  std::uint64_t n_ = 0;
  SdIndex sd_;
};

SetFamily reduce_simple(const Instance& inst);

/// Coordinates permuted at random and cut into k contiguous parts (leading
/// parts one larger when k does not divide d). For part j and entry value
/// i the set sigma(j, i) holds every vector with more than c1_bits ones
/// whose part-j bits are orthogonal to i. Vectors with at most c1_bits ones
/// are scanned.
class SdPartitionedIndex final : public OvIndex {
 public:
  static SdPartitionedIndex build(const Instance& inst, const ParamSet& params, std::uint64_t seed);
  /// Uses the given permutation instead of a random one; perm[t] is the
  /// coordinate at permuted position t.
  static SdPartitionedIndex build_with(const Instance& inst, const ParamSet& params,
                                       std::vector<unsigned> perm);

  std::string_view algo() const override { return "sd_part"; }
  unsigned d() const override { return inst_.d(); }
  bool query(const BitVec& q, QueryStats* stats = nullptr,
             Traversal traversal = Traversal::first_witness) const override;
  StructureStats structure() const override;
  void save_payload(BinaryWriter& w) const override;
  static SdPartitionedIndex load_payload(BinaryReader& r);

  const std::vector<unsigned>& permutation() const noexcept { return perm_; }
  const std::vector<CoordSet>& parts() const noexcept { return parts_; }
  const std::vector<std::uint32_t>& s1() const noexcept { return s1_; }
  const SdIndex& sd() const noexcept { return sd_; }
  /// Family position of sigma(j, i), or SdIndex::kEmptySet.
  std::uint32_t set_id(std::size_t part, std::uint64_t entry) const;

 private:
  explicit SdPartitionedIndex(Instance inst) : inst_(std::move(inst)) {}

  Instance inst_;
  std::vector<unsigned> perm_;
  std::vector<CoordSet> parts_;
  std::vector<std::uint32_t> s1_;
  std::map<std::uint64_t, std::uint32_t> ids_;  // (part << 32 | entry) -> set id
  SdIndex sd_;
};

/// Uniform permutation of [0, d) from the seed.
std::vector<unsigned> random_permutation(unsigned d, std::uint64_t seed);
/// k contiguous blocks of the permuted coordinates, leading blocks larger.
std::vector<CoordSet> permuted_parts(const std::vector<unsigned>& perm, unsigned k);

bool query_via_sd(const SdPartitionedIndex& index, const BitVec& q, QueryStats* stats = nullptr);

}  // namespace ovi
