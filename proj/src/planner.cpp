#include "ovi/planner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "ovi/error.hpp"

namespace ovi {

namespace {

double xlog2x(double t) { return t > 0 ? t * std::log2(t) : 0.0; }

// Closed form without domain checks; m = 0 and the endpoints give 0.
double entropy_exponent(double m, double k) {
  if (m <= 0 || k <= 0 || k >= m) return 0.0;
  return xlog2x(m) - xlog2x(k) - xlog2x(m - k);
}

std::uint64_t round_u64(double v) { return static_cast<std::uint64_t>(std::llround(v)); }
unsigned round_u(double v) { return static_cast<unsigned>(std::max(0LL, std::llround(v))); }

}  // namespace

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::dbo: return "dbo";
    case Profile::tlqg: return "tlqg";
    case Profile::blqg: return "blqg";
    case Profile::combined: return "combined";
    case Profile::random_opt: return "random_opt";
    case Profile::sd: return "sd";
  }
  return "?";
}

Profile parse_profile(std::string_view s) {
  for (Profile p : {Profile::dbo, Profile::tlqg, Profile::blqg, Profile::combined,
                    Profile::random_opt, Profile::sd}) {
    if (to_string(p) == s) return p;
  }
  throw PlanningError("unknown profile '" + std::string(s) + "'");
}

double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double binom_exponent(double m, double k) {
  if (!(m > 0) || !(k >= 0) || !(k <= m)) {
    std::ostringstream msg;
    msg << "binom_exponent domain violation: m=" << m << " k=" << k;
    throw ContractError(msg.str());
  }
  return entropy_exponent(m, k);
}

double choose_c1(double c, double delta) {
  if (!(c > 1)) throw ContractError("choose_c1 needs c > 1");
  if (!(delta > 0) || delta > 1) throw ContractError("choose_c1 needs delta in (0, 1]");
  const double target = 1.0 - delta;
  double hi = c / 2;
  if (entropy_exponent(c, hi) <= target) return hi;
  double lo = 0.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (entropy_exponent(c, mid) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double expected_duplication(double c, double x_frac, double parts) {
  if (!(x_frac >= 0) || x_frac > c || !(parts > 0)) {
    throw ContractError("expected_duplication needs 0 <= x_frac <= c and parts > 0");
  }
  const double part = c / parts;
  const double zeros = c - x_frac;
  // y log n of the part's coordinates are zeros of the vector.
  const double lo = std::max(0.0, part - x_frac);
  const double hi = std::min(part, zeros);
  const double norm = entropy_exponent(c, part);
  auto summand = [&](double y) {
    return entropy_exponent(zeros, y) + entropy_exponent(x_frac, part - y) + y - norm;
  };
  if (hi <= lo) return summand(lo);
  // The summand exponent is concave in y.
  double a = lo, b = hi;
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3;
    const double m2 = b - (b - a) / 3;
    if (summand(m1) < summand(m2)) {
      a = m1;
    } else {
      b = m2;
    }
  }
  return std::max({summand(lo), summand(hi), summand(0.5 * (a + b))});
}

double ParamSet::log2n() const { return std::log2(static_cast<double>(n)); }

void ParamSet::validate() const {
  auto fail = [](const std::string& m) { throw PlanningError(m); };
  if (d == 0 || d > 64) fail("d must be in [1, 64]");
  switch (profile) {
    case Profile::tlqg:
    case Profile::blqg:
    case Profile::combined:
    case Profile::random_opt:
      if (w_bits > d) fail("w_bits exceeds d");
      if (x_bits >= w_bits) fail("x_bits must be below w_bits");
      if (x_bits == 0) fail("x_bits must be positive");
      if (static_cast<unsigned>(std::popcount(w_mask)) != w_bits || (w_mask >> d) != 0) {
        fail("w_mask must select exactly w_bits of the d coordinates");
      }
      if (profile == Profile::combined && 2 * x_bits >= w_bits) {
        fail("combined needs x_bits < w_bits / 2");
      }
      break;
    case Profile::dbo:
    case Profile::sd:
      if (part_bits == 0 || part_bits > d) fail("part_bits must be in [1, d]");
      break;
  }
  if (c1_bits > (d + 1) / 2) fail("c1_bits exceeds d/2");
  if (tau_list == 0 || tau_entry == 0 || tau_s == 0) fail("thresholds must be at least 1");
}

void ParamSet::refresh_checks() {
  warnings.clear();
  sublinear_ok = true;
  if (profile == Profile::tlqg || profile == Profile::blqg || profile == Profile::combined ||
      profile == Profile::random_opt) {
    const std::uint64_t per_visit = profile == Profile::random_opt ? ell_max : tau_list;
    const double work = (w_bits - x_bits) + std::log2(static_cast<double>(per_visit));
    if (work >= log2n()) {
      sublinear_ok = false;
      std::ostringstream m;
      m << "sublinearity budget: (w_bits - x_bits) + log2(tau) = " << work << " >= log2 n = " << log2n()
        << "; worst-case query work can reach n";
      warnings.push_back(m.str());
    }
  }
  if (profile == Profile::combined && 3 * x_bits <= w_bits) {
    warnings.push_back("x_bits <= w_bits/3: the middle visit bound C(w-x, x) does not apply");
  }
}

ParamSet plan_params(std::uint64_t n, unsigned d, Profile profile) {
  if (n < 16) throw PlanningError("plan_params needs n >= 16");
  const double L = std::log2(static_cast<double>(n));
  if (d < L) throw PlanningError("plan_params needs d >= log2 n");
  if (d > 64) throw PlanningError("d above 64 is not supported");

  ParamSet p;
  p.profile = profile;
  p.n = n;
  p.d = d;
  const unsigned ceil_l = static_cast<unsigned>(std::ceil(L - 1e-12));
  const double c = d / L;

  switch (profile) {
    case Profile::tlqg:
    case Profile::blqg:
    case Profile::combined:
      p.w_bits = round_u(1.25 * L);
      p.x_bits = round_u(0.3 * L);
      p.tau_list = profile == Profile::combined
                       ? std::max<std::uint64_t>(1, round_u64(std::pow(double(n), p.mid_exp)))
                       : 4ull * d;
      break;
    case Profile::random_opt:
      p.w_bits = round_u(L);
      p.delta_bits = std::max(1u, round_u(p.random_delta * L));
      p.x_bits = p.delta_bits;
      p.tau_list = kUnbounded;
      p.ell_max = 4ull * d;
      break;
    case Profile::dbo:
    case Profile::sd:
      p.part_bits = std::min(d, std::max(d > ceil_l ? d - ceil_l : 0u, ceil_l));
      p.c1_bits = c > 1 ? round_u(choose_c1(c, p.c1_delta) * L) : 0;
      p.tau_entry = std::max<std::uint64_t>(1, round_u64(std::pow(double(n), p.entry_exp)));
      p.tau_s = static_cast<std::uint64_t>(std::ceil(std::sqrt(double(n))));
      p.sd_k = 2;
      break;
  }
  if (p.w_bits > d) {
    throw PlanningError("planned w_bits=" + std::to_string(p.w_bits) + " exceeds d=" + std::to_string(d));
  }
  p.w_mask = low_mask(p.w_bits);
  p.validate();
  p.refresh_checks();
  return p;
}

PlanReport predict(const ParamSet& p) {
  PlanReport r;
  r.params = p;
  const double L = p.log2n();
  const double n = static_cast<double>(p.n);
  const double c = p.d / L;
  const double k = p.w_bits / L;
  const double x = p.x_bits / L;
  const double side = std::ldexp(1.0, static_cast<int>(p.d) - static_cast<int>(p.w_bits));
  auto add = [&](std::string name, double exponent, double bits) {
    r.components.push_back({std::move(name), exponent, bits});
    r.predicted_total_bits += bits;
  };
  auto level_sum = [&](unsigned lo, unsigned hi) {
    double s = 0;
    for (unsigned j = lo; j <= hi && j <= p.w_bits; ++j) s += binomial(p.w_bits, j);
    return s;
  };

  switch (p.profile) {
    case Profile::tlqg:
      add("top_bitmaps", c - k + entropy_exponent(k, x), level_sum(0, p.x_bits) * side);
      add("long_list_bitmaps", c - k + 1 - std::log(double(p.tau_list)) / std::log(n),
          std::floor(n / double(p.tau_list)) * side);
      add("lists", 1.0, 32 * n);
      break;
    case Profile::random_opt:
      add("top_bitmaps", c - k + entropy_exponent(k, x), level_sum(0, p.x_bits) * side);
      add("lists", 1.0, 32 * n);
      break;
    case Profile::blqg: {
      const double dup = std::ldexp(1.0, static_cast<int>(p.w_bits - p.x_bits) - 1);
      add("bottom_bitmaps", c - k + entropy_exponent(k, x), level_sum(p.w_bits - p.x_bits, p.w_bits) * side);
      add("upper_lists", 1 + k - x, 32 * n * dup);
      add("upper_long_bitmaps", c - x, std::floor(n * dup / double(p.tau_list)) * side);
      break;
    }
    case Profile::combined:
      add("top_bitmaps", c - k + entropy_exponent(k, x), level_sum(0, p.x_bits) * side);
      add("bottom_bitmaps", c - k + entropy_exponent(k, x), level_sum(p.w_bits - p.x_bits, p.w_bits) * side);
      add("middle_lists", 1.0, 32 * n);
      add("middle_long_bitmaps", c - k + 1 - std::log(double(p.tau_list)) / std::log(n),
          std::floor(n / double(p.tau_list)) * side);
      break;
    case Profile::dbo: {
      const double kp = p.part_bits / L;
      const double c1 = p.c1_bits / L;
      const unsigned parts = std::max(1u, p.d / std::max(1u, p.part_bits));
      const unsigned min_ones = (p.c1_bits + parts) / parts;  // ceil((c1_bits + 1) / parts)
      const double per_vec = std::ldexp(1.0, static_cast<int>(p.part_bits) - static_cast<int>(std::min(min_ones, p.part_bits)));
      double s1 = 0;
      for (unsigned j = 0; j <= p.c1_bits; ++j) s1 += binomial(p.d, j);
      add("s1", entropy_exponent(c, c1), 32 * std::min(n, s1));
      add("arrays", kp + 1 - (c1 / c) * kp, 32 * n * per_vec);
      add("long_entry_bitmaps", c - (c1 / c) * kp,
          std::floor(n * per_vec / double(p.tau_entry)) * std::ldexp(1.0, static_cast<int>(p.d - p.part_bits)));
      break;
    }
    case Profile::sd: {
      const double kk = p.sd_k;
      const double worst_n = n * kk * std::ldexp(1.0, static_cast<int>(std::ceil(p.d / kk)));
      add("family_worst", c / kk + 1, 32 * worst_n);
      add("heavy_table", kk * (c / kk + 1) - kk * std::log(double(p.tau_s)) / std::log(n),
          std::pow(worst_n / double(p.tau_s), kk));
      break;
    }
  }
  r.fits_budget = r.predicted_total_bits <= static_cast<double>(p.budget_bits);
  return r;
}

}  // namespace ovi
