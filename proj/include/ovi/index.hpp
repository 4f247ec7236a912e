#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ovi/bitvec.hpp"
#include "ovi/instance.hpp"
#include "ovi/orth_bitmap.hpp"
#include "ovi/query_stats.hpp"

namespace ovi {

class BinaryWriter;
class BinaryReader;

/// Linear-scan oracle: true iff some vector of `inst` is orthogonal to q.
bool query_scan(const Instance& inst, const BitVec& q);
/// Ascending indices of every vector orthogonal to q.
std::vector<std::uint32_t> report_scan(const Instance& inst, const BitVec& q);

/// Common surface of every OV index. Built structures are immutable; any
/// number of threads may query concurrently.
class OvIndex {
 public:
  virtual ~OvIndex() = default;

  virtual std::string_view algo() const = 0;
  virtual unsigned d() const = 0;

  virtual bool query(const BitVec& q, QueryStats* stats = nullptr,
                     Traversal traversal = Traversal::first_witness) const = 0;

  virtual bool supports_report() const { return false; }
  /// Ascending indices of all orthogonal vectors. Throws when unsupported.
  virtual std::vector<std::uint32_t> report(const BitVec& q, QueryStats* stats = nullptr) const;

  virtual StructureStats structure() const = 0;

  /// Writes everything needed to answer queries; see container.hpp.
  virtual void save_payload(BinaryWriter& w) const = 0;
};

class ScanIndex final : public OvIndex {
 public:
  explicit ScanIndex(Instance inst) : inst_(std::move(inst)) {}

  std::string_view algo() const override { return "scan"; }
  unsigned d() const override { return inst_.d(); }
  bool query(const BitVec& q, QueryStats* stats, Traversal traversal) const override;
  bool supports_report() const override { return true; }
  std::vector<std::uint32_t> report(const BitVec& q, QueryStats* stats) const override;
  StructureStats structure() const override;
  void save_payload(BinaryWriter& w) const override;
  static ScanIndex load_payload(BinaryReader& r);

 private:
  Instance inst_;
};

class LookupIndex final : public OvIndex {
 public:
  explicit LookupIndex(const Instance& inst, std::uint64_t budget_bits = kDefaultBudgetBits)
      : bitmap_(build_lookup(inst, budget_bits)) {}

  std::string_view algo() const override { return "lookup"; }
  unsigned d() const override { return bitmap_.coords().width(); }
  bool query(const BitVec& q, QueryStats* stats, Traversal traversal) const override;
  StructureStats structure() const override;
  void save_payload(BinaryWriter& w) const override;
  static LookupIndex load_payload(BinaryReader& r);

  const OrthBitmap& bitmap() const noexcept { return bitmap_; }

 private:
  explicit LookupIndex(OrthBitmap bm) : bitmap_(std::move(bm)) {}
  OrthBitmap bitmap_;
};

// Shared helpers for index payloads.
void save_vectors(BinaryWriter& w, const Instance& inst);
Instance load_vectors(BinaryReader& r);

}  // namespace ovi
