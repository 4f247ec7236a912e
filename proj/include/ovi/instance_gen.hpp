#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ovi/instance.hpp"

namespace ovi {

/// n vectors of d independent fair bits, reproducible per seed.
Instance gen_random(std::size_t n, unsigned d, std::uint64_t seed);

/// Block/group construction that forces mid-sized lists for every W.
/// Vectors come in groups of g = 2^block_bits. In group i the block
/// i mod num_blocks runs through all g values and every other block holds
/// the constant i mod g. Needs g | n and num_blocks >= 3; the vectors are
/// pairwise distinct when n / g <= g.
Instance gen_adversarial(std::size_t n, unsigned block_bits, unsigned num_blocks);

/// Each vector picks one half of the coordinates at random and has uniform
/// bits there and zeros elsewhere.
Instance gen_structured(std::size_t n, unsigned d, std::uint64_t seed);

/// Uniform w_bits-subset of [0, d).
CoordSet random_coords(unsigned d, unsigned w_bits, std::uint64_t& state);

struct ListSample {
  std::uint64_t w_mask = 0;
  std::size_t max_length = 0;
  std::map<std::size_t, std::size_t> histogram;  // list length -> number of lists
  std::size_t band_mass = 0;                     // vectors in lists with length in [lo, hi]
};

struct ListStats {
  unsigned w_bits = 0;
  std::size_t band_lo = 0;
  std::size_t band_hi = 0;
  std::vector<ListSample> samples;
};

ListStats analyze_lists(const Instance& inst, unsigned w_bits, std::size_t num_samples, std::uint64_t seed,
                        std::size_t band_lo, std::size_t band_hi);
/// Same statistics for one fixed W.
ListSample analyze_w(const Instance& inst, const CoordSet& w, std::size_t band_lo, std::size_t band_hi);

}  // namespace ovi
