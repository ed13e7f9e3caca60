#pragma once

// Level-count and growth-factor optimization under the two classic
// constraints: fixed C = S_l / S_0, and fixed total size S_0 + ... + S_l.

#include <utility>
#include <vector>

#include "vat/design.hpp"

namespace vat {

struct LambertEval {
  double x = 0;
  double w0 = 0;
  // |w e^w - x|, evaluated in extended precision.
  double residual = 0;
};

// Principal branch W_0 for x >= -1/e (Halley iteration). Throws DomainError
// below the branch point.
LambertEval lambert_w0(double x);

struct LevelsAndGrowth {
  double levels = 0;
  double growth = 0;
};

// Real minimizer of 2 l C^{1/l} + 2l - 1: l = ln C / (W(1/e) + 1),
// f = e^{W(1/e) + 1}.
LevelsAndGrowth optimal_levels_constant_c_exact(double c);
// Same closed form with W(1/e) rounded to 0.5 (f = e^{3/2}), kept for
// comparison with the commonly quoted rounded optimum.
LevelsAndGrowth optimal_levels_constant_c_rounded(double c);
// Minimizer of l C^{1/l}: l = ln C, f = e.
LevelsAndGrowth optimal_levels_simplified(double c);

// 2 l C^{1/l} + 2l - 1, the LSM page-rate factor with uniform f = C^{1/l}.
double lsm_objective(double c, double l);

struct CurvePoint {
  int levels = 0;
  double growth = 0;
  double objective = 0;
};

struct OptimizationResult {
  Design design;
  int levels = 0;
  double growth = 0;
  double objective = 0;
  // Unconstrained real optimum (only for the a = r = 1 leveling case, where the
  // Lambert closed form applies); zero otherwise.
  double real_levels = 0;
  std::vector<CurvePoint> curve;
};

struct MinimizeRequest {
  Design design;
  double a = 1.0;
  double r = 1.0;
  double p = 1.0;
  double c = 1000.0;
  int l_min = 1;
  int l_max = 30;
  // B / S_l for per-SST designs.
  double sst_over_sl = 0.0;
};

// Integer scan over l in [l_min, l_max] with f = C^{1/l}; ties go to the
// smaller l, which also has the smaller space amplification.
OptimizationResult minimize_cost_ratio(const MinimizeRequest& request);

struct GrowthSchedule {
  std::vector<double> factors;  // f_1 .. f_l
  double lagrange_multiplier = 0;
  double total_bytes = 0;
  double s0_bytes = 0;
};

// Factors implied by the Lagrange recurrence for a given f_l:
// f_{l-1} = 1 + f_l, f_{i-1} = f_i + 1 / (f_i ... f_{l-1}).
std::vector<double> growth_schedule_from_anchor(int levels, double last_factor);

// S_0 (1 + f_1 + f_1 f_2 + ... + f_1...f_l)
double schedule_total_bytes(const std::vector<double>& factors, double s0_bytes);

// Solves for f_l by bisection so the schedule's total size equals
// total_bytes to 1e-9 relative. Throws DomainError when no f_l > 1 fits.
GrowthSchedule growth_schedule_constant_total(int levels, double total_bytes, double s0_bytes);

// S_l (2l - 1 + a (sum f_i - l)) with S_l = S_0 prod f_i: traffic for a
// per-level growth schedule.
double traffic_for_schedule(const std::vector<double>& factors, double s0_bytes, double a);

}  // namespace vat
