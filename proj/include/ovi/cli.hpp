#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ovi/index.hpp"
#include "ovi/planner.hpp"

namespace ovi {

/// Runs the `ovi` command line. Exit codes: 0 ok, 1 usage or parse error,
/// 2 guard, capacity or digest refusal, 3 verification mismatch.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CounterSummary {
  double mean = 0;
  std::uint64_t max = 0;
};

struct BenchRecord {
  std::string algo;
  std::uint64_t n = 0;
  unsigned d = 0;
  ParamSet params;
  StructureStats structure;
  double build_ms = 0;
  double query_ns_mean = 0;
  std::size_t queries = 0;
  std::size_t positives = 0;
  CounterSummary nodes_visited, list_elements_scanned, bitmap_lookups, boundary_probes, membership_probes;
};

/// Builds `algo` over `inst` and runs every query, fanning out over
/// `threads` workers.
BenchRecord bench_one(const std::string& algo, const Instance& inst, const ParamSet& params,
                      const std::vector<std::uint64_t>& queries, unsigned threads = 1, std::uint64_t seed = 0);

/// For each n: a uniform instance with d = round(c log2 n), planned defaults,
/// and `num_queries` uniform queries.
std::vector<BenchRecord> bench_sweep(const std::string& algo, const std::vector<std::uint64_t>& ns, double c,
                                     std::uint64_t seed, std::size_t num_queries, unsigned threads = 1);

/// Least-squares slope of log2(y) against log2(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ovi
