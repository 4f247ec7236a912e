#pragma once

#include "ovi/planner.hpp"

namespace ovi::testing {

inline ParamSet qg_params(Profile profile, std::uint64_t n, unsigned d, unsigned w_bits, unsigned x_bits,
                          std::uint64_t tau) {
  ParamSet p = plan_params(n, d, profile);
  p.w_bits = w_bits;
  p.w_mask = low_mask(w_bits);
  p.x_bits = x_bits;
  p.delta_bits = x_bits;
  p.tau_list = tau;
  return p;
}

}  // namespace ovi::testing
