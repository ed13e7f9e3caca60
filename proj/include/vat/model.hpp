#pragma once

// Closed-form and summation-form insert-path traffic for multi-level KV
// stores. Everything here is a pure function.
//
// Symbols: S_0 is the in-memory level, S_l the last level (= dataset),
// f the growth factor S_{i+1}/S_i, l the number of on-device levels,
// a the fraction of the lower level read and written per merge,
// r the achieved fraction of sequential device throughput,
// p = K_l/V_l the key-to-value byte ratio, C = S_l/S_0.

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vat/design.hpp"

namespace vat {

// Exact rational arithmetic for the summation oracles and their closed forms.
using Exact = boost::multiprecision::cpp_rational;

// Parses a decimal literal ("0.68", "1e-3", "7") into an exact rational.
Exact exact_from_decimal(std::string_view text);
// Exact value of the binary double (no rounding to a decimal).
Exact exact_from_double(double v);
double to_double(const Exact& v);

struct ModelParams {
  double a = 1.0;
  double r = 1.0;
  double f = 10.0;
  double l = 3.0;
  double p = 1.0;
  double c = 1000.0;

  // Builds a parameter set from any two of {f, l, C}; with all three the
  // relation f^l = C must hold to 1e-6 relative. Throws DomainError.
  static ModelParams make(double a, double r, std::optional<double> f, std::optional<double> l,
                          std::optional<double> c, double p = 1.0);
};

// Throws DomainError unless 0<=a<=1, 0<r<=1, f>1, l>=1, p>0, C>1 and
// f^l = C to 1e-6 relative.
void validate(const ModelParams& params);

// Byte geometry. For the uniform-f layouts built here S_i = S_0 * f^i.
struct SizeLayout {
  Exact s0;
  std::vector<Exact> level_sizes;  // S_0 .. S_l
  Exact sl;
  Exact kl;  // key bytes in the last level (value-log designs)
  Exact vl;  // value bytes
  Exact sst;

  int levels() const { return static_cast<int>(level_sizes.size()) - 1; }

  // S_i = s0 * f^i for i = 0..l; kl = sl, vl = 0 unless set otherwise.
  static SizeLayout geometric(const Exact& s0, std::int64_t f, int l);
  static SizeLayout geometric(const Exact& s0, std::int64_t f, int l, const Exact& sst);
  // Key/value split with p = K_l / V_l, applied to every level in proportion.
  SizeLayout with_key_ratio(const Exact& p) const;
};

struct TrafficEstimate {
  double d_bytes = 0;
  double cost_ratio = 0;
};

struct LsmParams {
  double rate_r = 1.0;      // incoming bytes/s
  double page_bytes = 1.0;  // S_p
  std::vector<double> growth_factors;

  int levels() const { return static_cast<int>(growth_factors.size()); }
  static LsmParams uniform(double rate, double page, double f, int l);
};

// --- leveling, values in place ---------------------------------------------

// Literal double summation: every merge of L_i into L_{i+1} moves S_i
// (read+write, write only for the in-memory L_0) plus 2a((j-1) mod f) S_i
// of the lower level on the j-th merge.
Exact traffic_basic_sum(const SizeLayout& layout, const Exact& a, std::int64_t f);

// S_l (2l - 1 - al + afl)
double traffic_basic_closed(double sl, double a, double f, double l);
Exact traffic_basic_closed(const Exact& sl, const Exact& a, std::int64_t f, int l);

// (2l - 1 - al + afl) / r
double cost_ratio_basic(const ModelParams& params);

// --- key-value separation ----------------------------------------------------

// Keys traverse the levels (K_i = S_i * K_l / S_l); the whole dataset is
// appended to the value log once.
Exact traffic_log_sum(const SizeLayout& layout, const Exact& a, std::int64_t f);

// K_l (2l - 1 - al + afl) + S_l
double traffic_log_closed(double kl, double sl, double a, double f, double l);
Exact traffic_log_closed(const Exact& kl, const Exact& sl, const Exact& a, std::int64_t f, int l);

// (p (2l - 1 - al + afl) + p + 1) / (r (p + 1))
double cost_ratio_log(const ModelParams& params);

// --- tiering -----------------------------------------------------------------

// (2l - 1) / r
double cost_ratio_tiering(double r, double l);
// l = log_f C
double cost_ratio_tiering(double r, double f, double c);
// (p (2l - 1) + p + 1) / (r (p + 1))
double cost_ratio_tiering_log(const ModelParams& params);

// --- per-SST compaction --------------------------------------------------------

// Literal per-SST summation: each level i is moved one SST (B bytes) at a
// time; while L_{i+1} fills, the k-th move overlaps k B / n_i lower bytes
// (n_i = S_i / B), afterwards f B per move.
Exact traffic_per_sst_sum(const SizeLayout& layout, const Exact& a, std::int64_t f);

// S_l (2l - 1 + a f l B / S_l + 2 a f l - a f (1 - f^-l) / (1 - f^-1))
double traffic_per_sst_closed(double sl, double a, double f, double l, double sst);
Exact traffic_per_sst_closed(const Exact& sl, const Exact& a, std::int64_t f, int l,
                             const Exact& sst);

// --- conversions and tradeoff helpers ----------------------------------------

// T / T_opt = D / (r S_l)
double cost_ratio_from_bytes(double d_bytes, double sl_bytes, double r);
TrafficEstimate make_estimate(double d_bytes, double sl_bytes, double r);

// Cost ratio of any design point. Per-SST designs need sst_over_sl = B / S_l;
// tiering ignores a.
double cost_ratio(const Design& design, const ModelParams& params, double sst_over_sl = 0.0);

// Capacity of L_0..L_{l-1} relative to S_l: sum_{i=1..l} f^-i.
double space_amplification(double f, double l);

// In-place / log cost ratio in the a -> 0, l = 1 limit: (p + 1) / (2p + 1).
double log_benefit_limit(double p);

// a = 0, r = 1 limit of the leveling cost ratio: 2l - 1.
double single_level_projection(double l);

// (R / S_p)(2 sum f_i + 2l - 1) pages per second.
double lsm_page_rate(const LsmParams& params);

}  // namespace vat
