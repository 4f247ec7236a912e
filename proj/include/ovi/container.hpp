#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ovi/index.hpp"
#include "ovi/planner.hpp"

namespace ovi {

/// Algorithm tags accepted by build_index and stored in containers.
const std::vector<std::string>& index_algos();

/// The planner profile whose defaults suit `algo`.
Profile profile_for(std::string_view algo);

/// Builds any index by tag. `seed` only matters for sd_part.
std::unique_ptr<OvIndex> build_index(std::string_view algo, const Instance& inst, const ParamSet& params,
                                     std::uint64_t seed = 0);

struct LoadedIndex {
  std::string algo;
  ParamSet params;
  std::uint64_t digest = 0;
  std::unique_ptr<OvIndex> index;
};

/// Layout: "OVIX", u32 version, algo tag, parameters, instance digest, payload.
void save_index(std::ostream& out, const OvIndex& index, const ParamSet& params, std::uint64_t digest);
LoadedIndex load_index(std::istream& in);

void save_index(const std::filesystem::path& path, const OvIndex& index, const ParamSet& params,
                std::uint64_t digest);
LoadedIndex load_index(const std::filesystem::path& path);

void save_params(BinaryWriter& w, const ParamSet& p);
ParamSet load_params(BinaryReader& r);

}  // namespace ovi
