#include "ovi/container.hpp"

#include <fstream>

#include "ovi/blqg.hpp"
#include "ovi/combined.hpp"
#include "ovi/divide_by_ones.hpp"
#include "ovi/reporting.hpp"
#include "ovi/serialize.hpp"
#include "ovi/set_disjointness.hpp"
#include "ovi/tlqg.hpp"

namespace ovi {

namespace {

constexpr char kMagic[4] = {'O', 'V', 'I', 'X'};
constexpr std::uint32_t kVersion = 1;

template <class T>
std::unique_ptr<OvIndex> boxed(T&& idx) {
  return std::make_unique<std::decay_t<T>>(std::forward<T>(idx));
}

}  // namespace

const std::vector<std::string>& index_algos() {
  static const std::vector<std::string> algos = {"scan",       "lookup",    "dbo",     "tlqg",
                                                 "tlqg_report", "blqg",     "combined", "random_opt",
                                                 "sd_simple",  "sd_part"};
  return algos;
}

Profile profile_for(std::string_view algo) {
  if (algo == "dbo") return Profile::dbo;
  if (algo == "blqg") return Profile::blqg;
  if (algo == "combined") return Profile::combined;
  if (algo == "random_opt") return Profile::random_opt;
  if (algo == "sd_simple" || algo == "sd_part") return Profile::sd;
  if (algo == "scan" || algo == "lookup" || algo == "tlqg" || algo == "tlqg_report") return Profile::tlqg;
  throw ContractError("unknown algorithm '" + std::string(algo) + "'");
}

std::unique_ptr<OvIndex> build_index(std::string_view algo, const Instance& inst, const ParamSet& params,
                                     std::uint64_t seed) {
  if (algo == "scan") return boxed(ScanIndex(inst));
  if (algo == "lookup") return boxed(LookupIndex(inst, params.budget_bits));
  if (algo == "dbo") return boxed(DboIndex::build(inst, params));
  if (algo == "tlqg") return boxed(TlqgIndex::build(inst, params, TlqgMode::standard));
  if (algo == "random_opt") return boxed(TlqgIndex::build(inst, params, TlqgMode::random_opt));
  if (algo == "tlqg_report") return boxed(TlqgReporter::build(inst, params));
  if (algo == "blqg") return boxed(BlqgIndex::build(inst, params));
  if (algo == "combined") return boxed(CombinedIndex::build(inst, params));
  if (algo == "sd_simple") return boxed(SdSimpleIndex::build(inst, params));
  if (algo == "sd_part") return boxed(SdPartitionedIndex::build(inst, params, seed));
  throw ContractError("unknown algorithm '" + std::string(algo) + "'");
}

void save_params(BinaryWriter& w, const ParamSet& p) {
  w.str(std::string(to_string(p.profile)));
  w.u64(p.n);
  w.u32(p.d);
  w.u32(p.w_bits);
  w.u64(p.w_mask);
  w.u32(p.x_bits);
  w.u64(p.tau_list);
  w.u32(p.delta_bits);
  w.u64(p.ell_max);
  w.u32(p.c1_bits);
  w.u32(p.part_bits);
  w.u32(p.eps_bits);
  w.u64(p.tau_entry);
  w.u32(p.sd_k);
  w.u64(p.tau_s);
  w.f64(p.c1_delta);
  w.f64(p.entry_exp);
  w.f64(p.mid_exp);
  w.f64(p.random_delta);
  w.u64(p.budget_bits);
  w.u64(p.table_budget);
}

ParamSet load_params(BinaryReader& r) {
  ParamSet p;
  p.profile = parse_profile(r.str());
  p.n = r.u64();
  p.d = r.u32();
  p.w_bits = r.u32();
  p.w_mask = r.u64();
  p.x_bits = r.u32();
  p.tau_list = r.u64();
  p.delta_bits = r.u32();
  p.ell_max = r.u64();
  p.c1_bits = r.u32();
  p.part_bits = r.u32();
  p.eps_bits = r.u32();
  p.tau_entry = r.u64();
  p.sd_k = r.u32();
  p.tau_s = r.u64();
  p.c1_delta = r.f64();
  p.entry_exp = r.f64();
  p.mid_exp = r.f64();
  p.random_delta = r.f64();
  p.budget_bits = r.u64();
  p.table_budget = r.u64();
  return p;
}

void save_index(std::ostream& out, const OvIndex& index, const ParamSet& params, std::uint64_t digest) {
  BinaryWriter w(out);
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kVersion);
  w.str(std::string(index.algo()));
  save_params(w, params);
  w.u64(digest);
  index.save_payload(w);
  if (!out) throw Error("failed to write index container");
}

LoadedIndex load_index(std::istream& in) {
  BinaryReader r(in);
  for (char c : kMagic) {
    if (r.u8() != static_cast<std::uint8_t>(c)) throw ParseError("not an index container", 0);
  }
  if (const auto v = r.u32(); v != kVersion) {
    throw ParseError("unsupported container version " + std::to_string(v), 0);
  }
  LoadedIndex out;
  out.algo = r.str();
  out.params = load_params(r);
  out.digest = r.u64();
  const std::string& a = out.algo;
  if (a == "scan") out.index = boxed(ScanIndex::load_payload(r));
  else if (a == "lookup") out.index = boxed(LookupIndex::load_payload(r));
  else if (a == "dbo") out.index = boxed(DboIndex::load_payload(r));
  else if (a == "tlqg" || a == "random_opt") out.index = boxed(TlqgIndex::load_payload(r));
  else if (a == "tlqg_report") out.index = boxed(TlqgReporter::load_payload(r));
  else if (a == "blqg") out.index = boxed(BlqgIndex::load_payload(r));
  else if (a == "combined") out.index = boxed(CombinedIndex::load_payload(r));
  else if (a == "sd_simple") out.index = boxed(SdSimpleIndex::load_payload(r));
  else if (a == "sd_part") out.index = boxed(SdPartitionedIndex::load_payload(r));
  else throw ParseError("unknown algorithm tag '" + a + "'", 0);
  if (out.index->algo() != a) throw ParseError("algorithm tag does not match the payload", 0);
  if (in.peek() != std::char_traits<char>::eof()) throw ParseError("trailing bytes after the payload", 0);
  return out;
}

void save_index(const std::filesystem::path& path, const OvIndex& index, const ParamSet& params,
                std::uint64_t digest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  save_index(out, index, params, digest);
}

LoadedIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return load_index(in);
}

}  // namespace ovi
