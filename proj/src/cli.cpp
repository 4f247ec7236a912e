#include "ovi/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ovi/container.hpp"
#include "ovi/instance_gen.hpp"
#include "ovi/set_disjointness.hpp"

namespace ovi {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Overrides {
  std::optional<unsigned> w_bits, x_bits, delta_bits, c1_bits, part_bits, eps_bits, k;
  std::optional<std::uint64_t> w_mask, tau_list, ell_max, tau_entry, tau_s, budget_bits;

  void attach(CLI::App* cmd) {
    cmd->add_option("--w-bits", w_bits, "size of W");
    cmd->add_option("--w-mask", w_mask, "W as a coordinate bit mask (overrides the low-bits default)");
    cmd->add_option("--x-bits", x_bits, "top/bottom level threshold");
    cmd->add_option("--tau-list", tau_list, "long-list threshold (middle threshold for combined)");
    cmd->add_option("--delta-bits", delta_bits, "random_opt top depth");
    cmd->add_option("--ell-max", ell_max, "random_opt list-length guard");
    cmd->add_option("--c1-bits", c1_bits, "low-weight cutoff");
    cmd->add_option("--part-bits", part_bits, "part size for dbo");
    cmd->add_option("--eps-bits", eps_bits, "epsilon block size for dbo (0 = divisible layout)");
    cmd->add_option("--tau-entry", tau_entry, "long-entry threshold for dbo");
    cmd->add_option("--tau-s", tau_s, "heavy-set threshold");
    cmd->add_option("-k,--k", k, "set-disjointness arity");
    cmd->add_option("--budget-bits", budget_bits, "memory budget in bits");
  }

  void apply(ParamSet& p) const {
    if (w_bits) {
      p.w_bits = *w_bits;
      p.w_mask = low_mask(*w_bits);
    }
    if (w_mask) {
      p.w_mask = *w_mask;
      p.w_bits = static_cast<unsigned>(std::popcount(*w_mask));
    }
    if (x_bits) p.x_bits = *x_bits;
    if (delta_bits) {
      p.delta_bits = *delta_bits;
      if (p.profile == Profile::random_opt) p.x_bits = *delta_bits;
    }
    if (tau_list) p.tau_list = *tau_list;
    if (ell_max) p.ell_max = *ell_max;
    if (c1_bits) p.c1_bits = *c1_bits;
    if (part_bits) p.part_bits = *part_bits;
    if (eps_bits) p.eps_bits = *eps_bits;
    if (tau_entry) p.tau_entry = *tau_entry;
    if (tau_s) p.tau_s = *tau_s;
    if (k) p.sd_k = *k;
    if (budget_bits) p.budget_bits = *budget_bits;
  }
};

bool needs_plan(std::string_view algo) { return algo != "scan" && algo != "lookup" && algo != "sd_simple"; }

ParamSet params_for(const std::string& algo, std::uint64_t n, unsigned d, const Overrides& o) {
  ParamSet p;
  try {
    p = plan_params(n, d, profile_for(algo));
  } catch (const PlanningError&) {
    if (needs_plan(algo)) throw;
    p.profile = profile_for(algo);
    p.n = n;
    p.d = d;
    p.tau_s = static_cast<std::uint64_t>(std::ceil(std::sqrt(double(n))));
  }
  o.apply(p);
  if (needs_plan(algo)) p.validate();
  p.refresh_checks();
  return p;
}

json params_json(const ParamSet& p) {
  return json{{"profile", to_string(p.profile)},
              {"n", p.n},
              {"d", p.d},
              {"w_bits", p.w_bits},
              {"w_mask", p.w_mask},
              {"x_bits", p.x_bits},
              {"tau_list", p.tau_list},
              {"delta_bits", p.delta_bits},
              {"ell_max", p.ell_max},
              {"c1_bits", p.c1_bits},
              {"part_bits", p.part_bits},
              {"eps_bits", p.eps_bits},
              {"tau_entry", p.tau_entry},
              {"sd_k", p.sd_k},
              {"tau_s", p.tau_s},
              {"budget_bits", p.budget_bits},
              {"sublinear_ok", p.sublinear_ok},
              {"warnings", p.warnings}};
}

json structure_json(const StructureStats& s) {
  return json{{"bitmap_count", s.bitmap_count},   {"bitmap_bits", s.bitmap_bits},
              {"list_count", s.list_count},       {"list_elements", s.list_elements},
              {"table_entries", s.table_entries}, {"node_count", s.node_count},
              {"edge_count", s.edge_count},       {"total_bits", s.total_bits()}};
}

json counter_json(const CounterSummary& c) { return json{{"mean", c.mean}, {"max", c.max}}; }

json record_json(const BenchRecord& r) {
  return json{{"algo", r.algo},
              {"n", r.n},
              {"d", r.d},
              {"params", params_json(r.params)},
              {"structure", structure_json(r.structure)},
              {"build_ms", r.build_ms},
              {"query_ns_mean", r.query_ns_mean},
              {"queries", r.queries},
              {"positives", r.positives},
              {"nodes_visited", counter_json(r.nodes_visited)},
              {"list_elements_scanned", counter_json(r.list_elements_scanned)},
              {"bitmap_lookups", counter_json(r.bitmap_lookups)},
              {"boundary_probes", counter_json(r.boundary_probes)},
              {"membership_probes", counter_json(r.membership_probes)}};
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& rows) {
  out << "algo,n,d,w_bits,x_bits,tau_list,bitmap_bits,list_count,list_elements,table_entries,node_count,"
         "edge_count,total_bits,build_ms,query_ns_mean,queries,positives,nodes_visited_mean,nodes_visited_max,"
         "list_elements_scanned_mean,list_elements_scanned_max,bitmap_lookups_mean,bitmap_lookups_max,"
         "boundary_probes_mean,boundary_probes_max,membership_probes_mean,membership_probes_max\n";
  for (const auto& r : rows) {
    const auto& s = r.structure;
    out << r.algo << ',' << r.n << ',' << r.d << ',' << r.params.w_bits << ',' << r.params.x_bits << ','
        << r.params.tau_list << ',' << s.bitmap_bits << ',' << s.list_count << ',' << s.list_elements << ','
        << s.table_entries << ',' << s.node_count << ',' << s.edge_count << ',' << s.total_bits() << ','
        << r.build_ms << ',' << r.query_ns_mean << ',' << r.queries << ',' << r.positives;
    for (const auto* c : {&r.nodes_visited, &r.list_elements_scanned, &r.bitmap_lookups, &r.boundary_probes,
                          &r.membership_probes}) {
      out << ',' << c->mean << ',' << c->max;
    }
    out << '\n';
  }
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<std::uint64_t> split_u64(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(tok, &used, 0));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw ParseError("bad number '" + tok + "' in list", 0);
    }
  }
  return out;
}

std::vector<std::string> split_str(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

std::string ids_line(const std::vector<std::uint32_t>& ids) {
  std::string s;
  for (std::size_t p = 0; p < ids.size(); ++p) {
    if (p) s += ' ';
    s += std::to_string(ids[p]);
  }
  return s;
}

std::uint64_t enum_cap_check(unsigned d, unsigned cap_bits) {
  if (d > cap_bits) {
    throw ContractError("exhaustive verification over 2^" + std::to_string(d) + " queries exceeds the cap 2^" +
                        std::to_string(cap_bits) + "; use --random");
  }
  return std::uint64_t{1} << d;
}

struct Aggregator {
  std::vector<QueryStats> stats;

  BenchRecord summarize(BenchRecord r) const {
    r.queries = stats.size();
    const double n = std::max<double>(1.0, static_cast<double>(stats.size()));
    auto fold = [&](auto field) {
      CounterSummary c;
      double sum = 0;
      for (const auto& s : stats) {
        sum += static_cast<double>(s.*field);
        c.max = std::max(c.max, s.*field);
      }
      c.mean = sum / n;
      return c;
    };
    r.nodes_visited = fold(&QueryStats::nodes_visited);
    r.list_elements_scanned = fold(&QueryStats::list_elements_scanned);
    r.bitmap_lookups = fold(&QueryStats::bitmap_lookups);
    r.boundary_probes = fold(&QueryStats::boundary_probes);
    r.membership_probes = fold(&QueryStats::membership_probes);
    r.positives = static_cast<std::size_t>(std::count_if(stats.begin(), stats.end(), [](const QueryStats& s) { return s.answer; }));
    return r;
  }
};

// ---- subcommands ----

struct GenArgs {
  std::string kind;
  std::size_t n = 0;
  unsigned d = 0;
  std::uint64_t seed = 1;
  unsigned block_bits = 0;
  unsigned blocks = 3;
  std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  Instance inst = a.kind == "random"       ? gen_random(a.n, a.d, a.seed)
                  : a.kind == "structured" ? gen_structured(a.n, a.d, a.seed)
                                           : gen_adversarial(a.n, a.block_bits, a.blocks);
  write_instance(inst, a.out);
  out << "wrote " << a.out << ": n=" << inst.n() << " d=" << inst.d() << '\n';
  return 0;
}

struct PlanArgs {
  std::string profile;
  std::uint64_t n = 0;
  unsigned d = 0;
  std::string instance;
  bool json = false;
  Overrides o;
};

int cmd_plan(const PlanArgs& a, std::ostream& out, std::ostream& err) {
  std::uint64_t n = a.n;
  unsigned d = a.d;
  if (!a.instance.empty()) {
    const Instance inst = read_instance(a.instance);
    n = inst.n();
    d = inst.d();
  }
  if (n == 0 || d == 0) throw ContractError("plan needs -n and -d, or -i");
  ParamSet p = plan_params(n, d, parse_profile(a.profile));
  a.o.apply(p);
  p.validate();
  p.refresh_checks();
  const PlanReport r = predict(p);
  if (a.json) {
    json comps = json::array();
    for (const auto& c : r.components) {
      comps.push_back({{"name", c.name}, {"exponent", c.exponent}, {"predicted_bits", c.predicted_bits}});
    }
    out << json{{"params", params_json(p)},
                {"components", comps},
                {"predicted_total_bits", r.predicted_total_bits},
                {"fits_budget", r.fits_budget}}
               .dump(2)
        << '\n';
  } else {
    out << params_json(p).dump() << '\n';
    for (const auto& c : r.components) {
      out << c.name << ": exponent " << c.exponent << ", predicted bits " << c.predicted_bits << '\n';
    }
    out << "predicted total bits " << r.predicted_total_bits << (r.fits_budget ? "" : " (over budget)") << '\n';
  }
  for (const auto& w : p.warnings) err << "warning: " << w << '\n';
  return 0;
}

struct BuildArgs {
  std::string algo;
  std::string instance;
  std::string out;
  std::string plan = "auto";
  std::uint64_t seed = 1;
  bool json = false;
  Overrides o;
};

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
  if (a.plan != "auto") throw ContractError("only --plan auto is supported; pass explicit overrides instead");
  const Instance inst = read_instance(a.instance);
  const ParamSet p = params_for(a.algo, inst.n(), inst.d(), a.o);
  for (const auto& w : p.warnings) err << "warning: " << w << '\n';
  const auto t0 = Clock::now();
  const auto idx = build_index(a.algo, inst, p, a.seed);
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  const std::string path = a.out.empty() ? a.instance + "." + a.algo : a.out;
  save_index(path, *idx, p, inst.digest());
  if (a.json) {
    out << json{{"algo", a.algo}, {"out", path}, {"build_ms", ms}, {"params", params_json(p)},
                {"structure", structure_json(idx->structure())}}
               .dump(2)
        << '\n';
  } else {
    out << "built " << a.algo << " -> " << path << ": total_bits=" << idx->structure().total_bits()
        << " build_ms=" << ms << '\n';
  }
  return 0;
}

struct QueryArgs {
  std::string index;
  std::string instance;
  std::string q;
  std::string batch;
  bool report = false;
  bool stats = false;
  bool json = false;
  unsigned threads = 1;
};

int cmd_query(const QueryArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<Instance> inst;
  LoadedIndex li = load_index(a.index);
  if (!a.instance.empty()) {
    inst = read_instance(a.instance);
    if (inst->digest() != li.digest) {
      err << "error: instance digest does not match the index; refusing to answer\n";
      return 2;
    }
  }
  const unsigned d = li.index->d();
  std::vector<std::uint64_t> qs;
  if (!a.q.empty()) {
    const BitVec q = BitVec::from_string(a.q);
    if (q.width() != d) throw ParseError("query has width " + std::to_string(q.width()) + ", index has d=" + std::to_string(d), 0);
    qs.push_back(q.value());
  }
  if (!a.batch.empty()) {
    const Instance b = read_instance(a.batch);
    if (b.d() != d) throw ParseError("batch has d=" + std::to_string(b.d()) + ", index has d=" + std::to_string(d), 0);
    qs.insert(qs.end(), b.values().begin(), b.values().end());
  }
  if (qs.empty()) throw ContractError("query needs -q or --batch");
  if (a.report && !li.index->supports_report()) {
    throw ContractError(li.algo + " index does not support --report; build tlqg_report or scan");
  }

  std::vector<QueryStats> stats(qs.size());
  std::vector<std::vector<std::uint32_t>> reports(a.report ? qs.size() : 0);
  parallel_for(qs.size(), a.threads, [&](std::size_t i) {
    const BitVec q(qs[i], d);
    if (a.report) {
      reports[i] = li.index->report(q, &stats[i]);
    } else {
      li.index->query(q, &stats[i]);
    }
  });

  Aggregator agg{stats};
  BenchRecord summary = agg.summarize(BenchRecord{});
  if (a.json) {
    json results = json::array();
    for (std::size_t i = 0; i < qs.size(); ++i) {
      json r{{"query", BitVec(qs[i], d).to_string()}, {"answer", stats[i].answer}};
      if (a.report) r["indices"] = reports[i];
      results.push_back(r);
    }
    json doc{{"algo", li.algo}, {"results", results}};
    if (a.stats) {
      doc["stats"] = {{"queries", summary.queries},
                      {"positives", summary.positives},
                      {"nodes_visited", counter_json(summary.nodes_visited)},
                      {"list_elements_scanned", counter_json(summary.list_elements_scanned)},
                      {"bitmap_lookups", counter_json(summary.bitmap_lookups)},
                      {"boundary_probes", counter_json(summary.boundary_probes)},
                      {"membership_probes", counter_json(summary.membership_probes)}};
    }
    out << doc.dump(2) << '\n';
    return 0;
  }
  for (std::size_t i = 0; i < qs.size(); ++i) {
    out << (stats[i].answer ? '1' : '0');
    if (a.report) out << (reports[i].empty() ? "" : " ") << ids_line(reports[i]);
    out << '\n';
  }
  if (a.stats) {
    out << json{{"queries", summary.queries},
                {"positives", summary.positives},
                {"nodes_visited", counter_json(summary.nodes_visited)},
                {"list_elements_scanned", counter_json(summary.list_elements_scanned)},
                {"bitmap_lookups", counter_json(summary.bitmap_lookups)},
                {"boundary_probes", counter_json(summary.boundary_probes)},
                {"membership_probes", counter_json(summary.membership_probes)}}
               .dump()
        << '\n';
  }
  return 0;
}

struct VerifyArgs {
  std::string index;
  std::string instance;
  bool all = false;
  std::size_t random = 0;
  std::uint64_t seed = 1;
  bool report = false;
  unsigned cap_bits = 24;
  unsigned threads = 1;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  LoadedIndex li = load_index(a.index);
  const Instance inst = read_instance(a.instance);
  if (inst.digest() != li.digest) {
    err << "error: instance digest does not match the index; refusing to verify\n";
    return 2;
  }
  if (a.all == (a.random > 0)) throw ContractError("verify needs exactly one of --all or --random N");
  if (a.report && !li.index->supports_report()) throw ContractError(li.algo + " index does not support --report");
  const unsigned d = inst.d();
  std::vector<std::uint64_t> qs;
  if (a.all) {
    const std::uint64_t total = enum_cap_check(d, a.cap_bits);
    qs.resize(total);
    for (std::uint64_t q = 0; q < total; ++q) qs[q] = q;
  } else {
    std::mt19937_64 rng(a.seed);
    qs.resize(a.random);
    for (auto& q : qs) q = rng() & low_mask(d);
  }
  std::vector<char> bad(qs.size(), 0);
  parallel_for(qs.size(), a.threads, [&](std::size_t i) {
    const BitVec q(qs[i], d);
    if (a.report) {
      bad[i] = li.index->report(q) != report_scan(inst, q);
    } else {
      bad[i] = li.index->query(q) != query_scan(inst, q);
    }
  });
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (!bad[i]) continue;
    if (++mismatches <= 10) {
      const BitVec q(qs[i], d);
      out << "mismatch q=" << q.to_string();
      if (a.report) {
        out << " index=[" << ids_line(li.index->report(q)) << "] oracle=[" << ids_line(report_scan(inst, q)) << "]";
      } else {
        out << " index=" << li.index->query(q) << " oracle=" << query_scan(inst, q);
      }
      out << '\n';
    }
  }
  out << "verified " << qs.size() << " queries against the scan oracle: " << mismatches << " mismatches\n";
  return mismatches ? 3 : 0;
}

struct BenchArgs {
  std::string mode;
  std::string algos = "tlqg";
  std::string ns = "256,1024,4096";
  double c = 2.0;
  unsigned d = 20;
  std::uint64_t seed = 1;
  std::size_t queries = 1000;
  unsigned threads = 1;
  std::size_t seeds = 10;
  unsigned k = 2;
  bool uniform = false;
  std::string instance;
  unsigned w_bits = 12;
  std::size_t samples = 32;
  std::string band = "4,256";
  bool json = false;
  bool csv = false;
  std::string out;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw Error("cannot open " + a.out + " for writing");
  }
  std::ostream& dst = a.out.empty() ? out : file;

  if (a.mode == "sweep") {
    std::vector<BenchRecord> rows;
    for (const auto& algo : split_str(a.algos)) {
      profile_for(algo);
      auto r = bench_sweep(algo, split_u64(a.ns), a.c, a.seed, a.queries, a.threads);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    if (a.csv) {
      write_csv(dst, rows);
    } else {
      json arr = json::array();
      for (const auto& r : rows) arr.push_back(record_json(r));
      dst << arr.dump(2) << '\n';
    }
    return 0;
  }

  if (a.mode == "sdperm") {
    const std::uint64_t n = split_u64(a.ns).front();
    const Instance inst = a.uniform ? gen_random(n, a.d, a.seed) : gen_structured(n, a.d, a.seed);
    ParamSet p = plan_params(n, a.d, Profile::sd);
    p.sd_k = a.k;
    std::vector<unsigned> identity(a.d);
    for (unsigned j = 0; j < a.d; ++j) identity[j] = j;
    const auto base = SdPartitionedIndex::build_with(inst, p, identity);
    json seeds = json::array();
    double sum = 0;
    for (std::size_t s = 0; s < a.seeds; ++s) {
      const auto idx = SdPartitionedIndex::build(inst, p, a.seed + 1 + s);
      const double total = static_cast<double>(idx.sd().family().total());
      sum += total;
      seeds.push_back({{"seed", a.seed + 1 + s}, {"N", total}});
    }
    const double mean = a.seeds ? sum / static_cast<double>(a.seeds) : 0.0;
    dst << json{{"instance", a.uniform ? "uniform" : "structured"},
                {"n", n},
                {"d", a.d},
                {"k", a.k},
                {"identity_N", base.sd().family().total()},
                {"random", seeds},
                {"random_mean_N", mean}}
               .dump(2)
        << '\n';
    return 0;
  }

  // lists
  if (a.instance.empty()) throw ContractError("bench lists needs -i");
  const Instance inst = read_instance(a.instance);
  const auto band = split_u64(a.band);
  if (band.size() != 2) throw ParseError("--band needs lo,hi", 0);
  const ListStats st = analyze_lists(inst, a.w_bits, a.samples, a.seed, band[0], band[1]);
  json samples = json::array();
  for (const auto& s : st.samples) {
    json hist = json::object();
    for (const auto& [len, count] : s.histogram) hist[std::to_string(len)] = count;
    samples.push_back({{"w_mask", s.w_mask}, {"max_length", s.max_length}, {"band_mass", s.band_mass}, {"histogram", hist}});
  }
  dst << json{{"n", inst.n()}, {"d", inst.d()}, {"w_bits", st.w_bits}, {"band", {st.band_lo, st.band_hi}},
              {"samples", samples}}
             .dump(2)
      << '\n';
  return 0;
}

}  // namespace

BenchRecord bench_one(const std::string& algo, const Instance& inst, const ParamSet& params,
                      const std::vector<std::uint64_t>& queries, unsigned threads, std::uint64_t seed) {
  BenchRecord r;
  r.algo = algo;
  r.n = inst.n();
  r.d = inst.d();
  r.params = params;
  const auto t0 = Clock::now();
  const auto idx = build_index(algo, inst, params, seed);
  r.build_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  r.structure = idx->structure();

  Aggregator agg;
  agg.stats.resize(queries.size());
  const auto t1 = Clock::now();
  parallel_for(queries.size(), threads, [&](std::size_t i) { idx->query(BitVec(queries[i], inst.d()), &agg.stats[i]); });
  const double ns = std::chrono::duration<double, std::nano>(Clock::now() - t1).count();
  r = agg.summarize(std::move(r));
  r.query_ns_mean = queries.empty() ? 0.0 : ns / static_cast<double>(queries.size());
  return r;
}

std::vector<BenchRecord> bench_sweep(const std::string& algo, const std::vector<std::uint64_t>& ns, double c,
                                     std::uint64_t seed, std::size_t num_queries, unsigned threads) {
  std::vector<BenchRecord> out;
  for (std::uint64_t n : ns) {
    const unsigned d = static_cast<unsigned>(std::lround(c * std::log2(static_cast<double>(n))));
    const Instance inst = gen_random(n, d, seed + n);
    const ParamSet p = params_for(algo, n, d, Overrides{});
    std::mt19937_64 rng(seed ^ (n * 0x9E3779B97F4A7C15ULL));
    std::vector<std::uint64_t> qs(num_queries);
    for (auto& q : qs) q = rng() & low_mask(d);
    out.push_back(bench_one(algo, inst, p, qs, threads, seed));
  }
  return out;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("slope fit needs two or more paired points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log2(x[i]);
    my += std::log2(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log2(x[i]) - mx;
    sxy += dx * (std::log2(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orthogonal vectors indexing"};
  app.name("ovi");
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate an instance");
  g->add_option("kind", gen.kind, "random | adversarial | structured")
      ->required()
      ->check(CLI::IsMember({"random", "adversarial", "structured"}));
  g->add_option("-n", gen.n, "number of vectors")->required();
  g->add_option("-d", gen.d, "dimension (random, structured)");
  g->add_option("--seed", gen.seed, "PRNG seed");
  g->add_option("--block-bits", gen.block_bits, "adversarial block size");
  g->add_option("--blocks", gen.blocks, "adversarial block count");
  g->add_option("-o,--out", gen.out, "output file (.ovib writes binary)")->required();

  PlanArgs plan;
  auto* pl = app.add_subcommand("plan", "print planned parameters and predicted sizes");
  pl->add_option("profile", plan.profile, "dbo | tlqg | blqg | combined | random_opt | sd")->required();
  pl->add_option("-n", plan.n, "number of vectors");
  pl->add_option("-d", plan.d, "dimension");
  pl->add_option("-i,--instance", plan.instance, "take n and d from an instance");
  pl->add_flag("--json", plan.json, "JSON output");
  plan.o.attach(pl);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "build an index container");
  b->add_option("algo", build.algo, "index algorithm")->required()->check(CLI::IsMember(index_algos()));
  b->add_option("-i,--instance", build.instance, "instance file")->required();
  b->add_option("-o,--out", build.out, "container path (default: <instance>.<algo>)");
  b->add_option("--plan", build.plan, "parameter source (auto)");
  b->add_option("--seed", build.seed, "permutation seed for sd_part");
  b->add_flag("--json", build.json, "JSON output");
  build.o.attach(b);

  QueryArgs query;
  auto* q = app.add_subcommand("query", "answer queries from a container");
  q->add_option("-x,--index", query.index, "index container")->required();
  q->add_option("-i,--instance", query.instance, "instance to check the digest against");
  q->add_option("-q", query.q, "query as a 0/1 string, coordinate 0 first");
  q->add_option("--batch", query.batch, "instance file of queries");
  q->add_flag("--report", query.report, "list orthogonal indices");
  q->add_flag("--stats", query.stats, "print aggregate work counters");
  q->add_flag("--json", query.json, "JSON output");
  q->add_option("--threads", query.threads, "worker threads");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "compare a container against the scan oracle");
  v->add_option("-x,--index", verify.index, "index container")->required();
  v->add_option("-i,--instance", verify.instance, "instance file")->required();
  v->add_flag("--all", verify.all, "every query of width d");
  v->add_option("--random", verify.random, "number of uniform random queries");
  v->add_option("--seed", verify.seed, "query seed");
  v->add_flag("--report", verify.report, "compare index lists instead of answers");
  v->add_option("--cap-bits", verify.cap_bits, "largest d allowed with --all");
  v->add_option("--threads", verify.threads, "worker threads");

  BenchArgs bench;
  auto* be = app.add_subcommand("bench", "measure structures and query work");
  be->add_option("mode", bench.mode, "sweep | sdperm | lists")
      ->required()
      ->check(CLI::IsMember({"sweep", "sdperm", "lists"}));
  be->add_option("-a,--algos", bench.algos, "comma-separated algorithms (sweep)");
  be->add_option("-n", bench.ns, "comma-separated instance sizes");
  be->add_option("-c", bench.c, "d = round(c log2 n) (sweep)");
  be->add_option("-d", bench.d, "dimension (sdperm)");
  be->add_option("--seed", bench.seed, "base seed");
  be->add_option("--queries", bench.queries, "queries per instance (sweep)");
  be->add_option("--threads", bench.threads, "worker threads");
  be->add_option("--seeds", bench.seeds, "random permutations (sdperm)");
  be->add_option("-k", bench.k, "arity (sdperm)");
  be->add_flag("--uniform", bench.uniform, "uniform instead of structured instance (sdperm)");
  be->add_option("-i,--instance", bench.instance, "instance file (lists)");
  be->add_option("--w-bits", bench.w_bits, "size of sampled W (lists)");
  be->add_option("--samples", bench.samples, "number of sampled W (lists)");
  be->add_option("--band", bench.band, "list-length band lo,hi (lists)");
  be->add_flag("--json", bench.json, "JSON output (default)");
  be->add_flag("--csv", bench.csv, "CSV output (sweep)");
  be->add_option("-o,--out", bench.out, "write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*g) {
      if (gen.kind != "adversarial" && gen.d == 0) throw ContractError("gen " + gen.kind + " needs -d");
      if (gen.kind == "adversarial" && gen.block_bits == 0) throw ContractError("gen adversarial needs --block-bits");
      return cmd_gen(gen, out);
    }
    if (*pl) return cmd_plan(plan, out, err);
    if (*b) return cmd_build(build, out, err);
    if (*q) return cmd_query(query, out, err);
    if (*v) return cmd_verify(verify, out, err);
    if (*be) return cmd_bench(bench, out);
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << '\n';
    return 2;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace ovi
