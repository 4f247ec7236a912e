#include "ovi/instance_gen.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "ovi/error.hpp"
#include "ovi/query_graph.hpp"

namespace ovi {

Instance gen_random(std::size_t n, unsigned d, std::uint64_t seed) {
  if (n == 0 || d == 0 || d > kMaxWidth) throw ContractError("need n >= 1 and 1 <= d <= 64");
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) x = rng() & low_mask(d);
  return Instance(d, std::move(v), "random seed=" + std::to_string(seed));
}

Instance gen_adversarial(std::size_t n, unsigned block_bits, unsigned num_blocks) {
  if (block_bits == 0 || num_blocks < 3) throw ContractError("need block_bits >= 1 and num_blocks >= 3");
  if (static_cast<std::uint64_t>(block_bits) * num_blocks > kMaxWidth) {
    throw ContractError("block_bits * num_blocks exceeds 64 coordinates");
  }
  const std::size_t g = std::size_t{1} << block_bits;
  if (n == 0 || n % g != 0) {
    throw ContractError("n = " + std::to_string(n) + " is not a multiple of the group size 2^" +
                        std::to_string(block_bits));
  }
  const unsigned d = block_bits * num_blocks;
  const std::size_t groups = n / g;
  std::vector<std::uint64_t> v;
  v.reserve(n);
  for (std::size_t i = 0; i < groups; ++i) {
    const unsigned sep = static_cast<unsigned>(i % num_blocks);
    const std::uint64_t constant = i % g;
    std::uint64_t base = 0;
    for (unsigned b = 0; b < num_blocks; ++b) {
      if (b != sep) base |= constant << (b * block_bits);
    }
    for (std::uint64_t t = 0; t < g; ++t) v.push_back(base | (t << (sep * block_bits)));
  }
  return Instance(d, std::move(v),
                  "adversarial block_bits=" + std::to_string(block_bits) + " blocks=" + std::to_string(num_blocks));
}

Instance gen_structured(std::size_t n, unsigned d, std::uint64_t seed) {
  if (n == 0 || d < 2 || d > kMaxWidth) throw ContractError("need n >= 1 and 2 <= d <= 64");
  std::mt19937_64 rng(seed);
  const std::uint64_t low = low_mask(d / 2);
  const std::uint64_t high = low_mask(d) & ~low;
  std::vector<std::uint64_t> v(n);
  for (auto& x : v) {
    const std::uint64_t bits = rng();
    x = bits & ((rng() & 1u) ? high : low);
  }
  return Instance(d, std::move(v), "structured seed=" + std::to_string(seed));
}

CoordSet random_coords(unsigned d, unsigned w_bits, std::uint64_t& state) {
  if (w_bits > d) throw ContractError("w_bits exceeds d");
  std::mt19937_64 rng(state);
  std::vector<unsigned> coords(d);
  std::iota(coords.begin(), coords.end(), 0u);
  std::uint64_t mask = 0;
  for (unsigned t = 0; t < w_bits; ++t) {
    std::uniform_int_distribution<unsigned> pick(t, d - 1);
    std::swap(coords[t], coords[pick(rng)]);
    mask |= std::uint64_t{1} << coords[t];
  }
  state = rng();
  return CoordSet(mask, d);
}

ListSample analyze_w(const Instance& inst, const CoordSet& w, std::size_t band_lo, std::size_t band_hi) {
  const ListMap lm = build_list_map(inst, w);
  ListSample s;
  s.w_mask = w.bits();
  for (std::size_t p = 0; p < lm.lists.key_count(); ++p) {
    const std::size_t len = lm.lists.list_at(p).size();
    s.max_length = std::max(s.max_length, len);
    ++s.histogram[len];
    if (len >= band_lo && len <= band_hi) s.band_mass += len;
  }
  return s;
}

ListStats analyze_lists(const Instance& inst, unsigned w_bits, std::size_t num_samples, std::uint64_t seed,
                        std::size_t band_lo, std::size_t band_hi) {
  ListStats st;
  st.w_bits = w_bits;
  st.band_lo = band_lo;
  st.band_hi = band_hi;
  std::uint64_t state = seed;
  for (std::size_t k = 0; k < num_samples; ++k) {
    st.samples.push_back(analyze_w(inst, random_coords(inst.d(), w_bits, state), band_lo, band_hi));
  }
  return st;
}

}  // namespace ovi
