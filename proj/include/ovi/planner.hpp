#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "ovi/orth_bitmap.hpp"

namespace ovi {

enum class Profile { dbo, tlqg, blqg, combined, random_opt, sd };

std::string_view to_string(Profile p);
Profile parse_profile(std::string_view s);

inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

/// Concrete integer parameters for every index builder. Asymptotic knobs
/// such as "x log n" are carried as explicit bit counts.
struct ParamSet {
  Profile profile = Profile::tlqg;
  std::uint64_t n = 0;
  unsigned d = 0;

  // Query graph.
  unsigned w_bits = 0;           // |W|
  std::uint64_t w_mask = 0;      // the W coordinates; low w_bits coordinates by default
  unsigned x_bits = 0;           // top/bottom level threshold
  std::uint64_t tau_list = 1;    // long-list threshold (middle threshold for combined)
  unsigned delta_bits = 0;       // random_opt top depth
  std::uint64_t ell_max = kUnbounded;  // random_opt list-length guard

  // DivideByOnes / set disjointness.
  unsigned c1_bits = 0;          // low-weight cutoff: weight <= c1_bits goes to S1
  unsigned part_bits = 0;
  unsigned eps_bits = 0;         // 0 selects the divisible layout
  std::uint64_t tau_entry = 1;
  unsigned sd_k = 2;
  std::uint64_t tau_s = 1;

  // Exponents behind the integer defaults.
  double c1_delta = 0.05;
  double entry_exp = 0.9;
  double mid_exp = 0.1;
  double random_delta = 0.1;

  std::uint64_t budget_bits = kDefaultBudgetBits;
  std::uint64_t table_budget = std::uint64_t{1} << 26;

  bool sublinear_ok = true;
  std::vector<std::string> warnings;

  double log2n() const;
  /// Throws PlanningError when a structural invariant fails.
  void validate() const;
  /// Recomputes the sublinearity budget check and warnings.
  void refresh_checks();
};

/// Predicted sizes: exponents are base n, counts are exact where the
/// structure size is determined by parameters alone.
struct PlanReport {
  ParamSet params;
  struct Component {
    std::string name;
    double exponent = 0;       // predicted space exponent (base n)
    double predicted_bits = 0; // at the planned n
  };
  std::vector<Component> components;
  double predicted_total_bits = 0;
  bool fits_budget = true;
};

/// m log m - k log k - (m-k) log(m-k), base 2. Zero at k = 0 and k = m.
double binom_exponent(double m, double k);

/// Largest c1 <= c/2 with binom_exponent(c, c1) <= 1 - delta (bisection, 1e-9).
double choose_c1(double c, double delta);

/// Exponent (base n) of the expected number of sets of one part containing
/// a vector with x_frac log n ones under a random part of (c/parts) log n
/// coordinates; the dominant summand of the expectation.
double expected_duplication(double c, double x_frac, double parts);

ParamSet plan_params(std::uint64_t n, unsigned d, Profile profile);
PlanReport predict(const ParamSet& params);

/// Exact binomial as a double (may be inf for huge arguments).
double binomial(unsigned n, unsigned k);

}  // namespace ovi
