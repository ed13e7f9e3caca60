#include "vat/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vat/errors.hpp"
#include "vat/model.hpp"

namespace vat {

namespace {

using ld = long double;

constexpr ld kInvE = 0.367879441171442321595523770161460867L;
constexpr double kRoundedW = 0.5;

// Starting point for Halley: branch-point series near -1/e, log1p in the
// middle, asymptotic ln x - ln ln x for large x.
ld lambert_initial_guess(ld x) {
  if (x < -0.25L) {
    const ld p = std::sqrt(2.0L * (std::numbers::e_v<ld> * x + 1.0L));
    return -1.0L + p - p * p / 3.0L + 11.0L / 72.0L * p * p * p;
  }
  if (x < 3.0L) return std::log1p(x);
  const ld l1 = std::log(x);
  const ld l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

LambertEval lambert_w0(double x) {
  const ld xl = x;
  if (xl < -kInvE) {
    // Allow the rounding of -1/e to double itself.
    if (xl < -kInvE * (1.0L + 1e-15L)) {
      throw DomainError("Lambert W_0 is undefined below -1/e (x = " + std::to_string(x) + ")");
    }
  }
  LambertEval out;
  out.x = x;
  if (x == 0.0) return out;
  if (xl <= -kInvE) {
    out.w0 = -1.0;
    out.residual = static_cast<double>(std::abs(-1.0L * std::exp(-1.0L) - xl));
    return out;
  }

  ld w = lambert_initial_guess(xl);
  for (int iter = 0; iter < 100; ++iter) {
    const ld ew = std::exp(w);
    const ld f = w * ew - xl;
    const ld wp1 = w + 1.0L;
    if (wp1 == 0.0L) break;
    const ld step = f / (ew * wp1 - (w + 2.0L) * f / (2.0L * wp1));
    w -= step;
    if (std::abs(step) <= 4.0L * std::numeric_limits<ld>::epsilon() * (1.0L + std::abs(w))) {
      break;
    }
  }
  out.w0 = static_cast<double>(w);
  out.residual = static_cast<double>(std::abs(w * std::exp(w) - xl));
  return out;
}

LevelsAndGrowth optimal_levels_constant_c_exact(double c) {
  if (!(c > 1.0)) throw DomainError("C must exceed 1");
  const double w = lambert_w0(1.0 / std::numbers::e).w0;
  return {std::log(c) / (w + 1.0), std::exp(w + 1.0)};
}

LevelsAndGrowth optimal_levels_constant_c_rounded(double c) {
  if (!(c > 1.0)) throw DomainError("C must exceed 1");
  return {std::log(c) / (kRoundedW + 1.0), std::exp(kRoundedW + 1.0)};
}

LevelsAndGrowth optimal_levels_simplified(double c) {
  if (!(c > 1.0)) throw DomainError("C must exceed 1");
  return {std::log(c), std::numbers::e};
}

double lsm_objective(double c, double l) {
  if (!(l > 0.0)) throw DomainError("level count must be positive");
  return 2.0 * l * std::pow(c, 1.0 / l) + 2.0 * l - 1.0;
}

OptimizationResult minimize_cost_ratio(const MinimizeRequest& request) {
  if (request.l_min < 1 || request.l_max < request.l_min) {
    throw DomainError("empty level range [" + std::to_string(request.l_min) + ", " +
                      std::to_string(request.l_max) + "]");
  }
  if (!(request.c > 1.0)) throw DomainError("C must exceed 1");

  OptimizationResult result;
  result.design = request.design;
  result.curve.reserve(static_cast<std::size_t>(request.l_max - request.l_min + 1));
  for (int l = request.l_min; l <= request.l_max; ++l) {
    ModelParams params;
    params.a = request.a;
    params.r = request.r;
    params.p = request.p;
    params.c = request.c;
    params.l = l;
    params.f = std::pow(request.c, 1.0 / l);
    if (!(params.f > 1.0)) continue;
    const double objective = cost_ratio(request.design, params, request.sst_over_sl);
    result.curve.push_back({l, params.f, objective});
  }
  if (result.curve.empty()) throw DomainError("no admissible level count in range");

  // Strict comparison keeps the first (smallest l) of equal minima.
  const auto best = std::min_element(
      result.curve.begin(), result.curve.end(),
      [](const CurvePoint& x, const CurvePoint& y) { return x.objective < y.objective; });
  result.levels = best->levels;
  result.growth = best->growth;
  result.objective = best->objective;

  const bool unit_leveling = !request.design.is_tiering() && !request.design.uses_log() &&
                             !request.design.per_sst() && request.a == 1.0 && request.r == 1.0;
  if (unit_leveling) result.real_levels = optimal_levels_constant_c_exact(request.c).levels;
  return result;
}

std::vector<double> growth_schedule_from_anchor(int levels, double last_factor) {
  if (levels < 1) throw DomainError("schedule needs at least one level");
  if (!(last_factor > 1.0)) throw DomainError("growth factors must exceed 1");
  std::vector<double> factors(static_cast<std::size_t>(levels));
  factors.back() = last_factor;
  // Running product f_i ... f_{l-1}; empty for the f_{l-1} = 1 + f_l step.
  double tail_product = 1.0;
  for (int i = levels - 1; i >= 1; --i) {
    const auto idx = static_cast<std::size_t>(i);
    factors[idx - 1] = factors[idx] + 1.0 / tail_product;
    tail_product *= factors[idx - 1];
  }
  return factors;
}

double schedule_total_bytes(const std::vector<double>& factors, double s0_bytes) {
  double total = 1.0;
  double product = 1.0;
  for (double f : factors) {
    product *= f;
    total += product;
  }
  return s0_bytes * total;
}

GrowthSchedule growth_schedule_constant_total(int levels, double total_bytes, double s0_bytes) {
  if (levels < 2) throw DomainError("constant-total schedules need at least 2 levels");
  if (!(s0_bytes > 0.0)) throw DomainError("S_0 must be positive");
  if (!(total_bytes > (levels + 1) * s0_bytes)) {
    throw DomainError("total size must exceed (l + 1) S_0");
  }
  auto total_for = [&](double fl) {
    return schedule_total_bytes(growth_schedule_from_anchor(levels, fl), s0_bytes);
  };

  // The total is increasing in f_l; f_l -> 1 gives the smallest feasible total.
  double lo = 1.0 + 1e-12;
  if (total_for(lo) > total_bytes) {
    throw DomainError("infeasible: total size " + std::to_string(total_bytes) +
                      " is below the minimum " + std::to_string(total_for(lo)) +
                      " reachable with every f_i > 1");
  }
  double hi = 2.0;
  while (total_for(hi) < total_bytes) {
    hi *= 2.0;
    if (!std::isfinite(total_for(hi))) throw DomainError("total size out of range");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (total_for(mid) < total_bytes) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  const double fl = 0.5 * (lo + hi);

  GrowthSchedule schedule;
  schedule.factors = growth_schedule_from_anchor(levels, fl);
  schedule.total_bytes = total_bytes;
  schedule.s0_bytes = s0_bytes;
  // f_1 = lambda (C - S_0).
  schedule.lagrange_multiplier = schedule.factors.front() / (total_bytes - s0_bytes);
  const double achieved = schedule_total_bytes(schedule.factors, s0_bytes);
  if (std::abs(achieved - total_bytes) > 1e-9 * total_bytes) {
    throw DomainError("schedule solver did not converge");
  }
  return schedule;
}

double traffic_for_schedule(const std::vector<double>& factors, double s0_bytes, double a) {
  if (factors.empty()) throw DomainError("schedule needs at least one level");
  double product = 1.0;
  double sum = 0.0;
  for (double f : factors) {
    if (!(f > 1.0)) throw DomainError("growth factors must exceed 1");
    product *= f;
    sum += f;
  }
  const double l = static_cast<double>(factors.size());
  return s0_bytes * product * (2.0 * l - 1.0 + a * (sum - l));
}

}  // namespace vat
