#pragma once

#include <cstdint>

namespace ovi {

/// Per-query work counters. Callers pass a fresh (or reset) object per query.
struct QueryStats {
  std::uint64_t nodes_visited = 0;
  std::uint64_t list_elements_scanned = 0;
  std::uint64_t bitmap_lookups = 0;
  // Bitmap probes made while completing a light query at the bottom boundary.
  std::uint64_t boundary_probes = 0;
  std::uint64_t membership_probes = 0;
  bool answer = false;

  void reset() { *this = QueryStats{}; }
};

/// How far a decision query walks once a witness is found.
enum class Traversal {
  first_witness,  // return on the first hit
  full,           // visit everything the algorithm would ever visit; used to audit counters
};

/// Space counters recorded at build time.
struct StructureStats {
  std::uint64_t bitmap_count = 0;
  std::uint64_t bitmap_bits = 0;
  std::uint64_t list_count = 0;
  std::uint64_t list_elements = 0;
  std::uint64_t table_entries = 0;
  std::uint64_t node_count = 0;
  std::uint64_t edge_count = 0;

  /// Bits of structure: bitmaps, 32-bit list elements, 64-bit list keys,
  /// one bit per table entry, 32-bit node and edge records.
  std::uint64_t total_bits() const {
    return bitmap_bits + 32 * list_elements + 64 * list_count + table_entries +
           32 * (node_count + edge_count);
  }

  StructureStats& operator+=(const StructureStats& o) {
    bitmap_count += o.bitmap_count;
    bitmap_bits += o.bitmap_bits;
    list_count += o.list_count;
    list_elements += o.list_elements;
    table_entries += o.table_entries;
    node_count += o.node_count;
    edge_count += o.edge_count;
    return *this;
  }
};

}  // namespace ovi
