#include "vat/model.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "vat/errors.hpp"

namespace vat {

namespace {

using boost::multiprecision::cpp_int;

bool is_integral(const Exact& v) { return denominator(v) == 1; }

Exact pow_exact(std::int64_t base, int exp) {
  cpp_int out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return Exact(out);
}

std::int64_t to_count(const Exact& v, const char* what) {
  if (!is_integral(v) || v < 0) {
    throw GeometryError(std::string(what) + " must be a non-negative integer");
  }
  return static_cast<std::int64_t>(numerator(v));
}

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

void require_growth(double f) {
  if (!(f > 1.0)) throw DomainError("growth factor f must exceed 1");
}

void require_levels(double l) {
  if (!(l >= 1.0)) throw DomainError("level count l must be at least 1");
}

void require_throughput(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("achieved throughput r must lie in (0, 1]");
}

void check_layout_shape(const SizeLayout& layout, std::int64_t f) {
  if (f < 2) throw DomainError("growth factor f must be an integer >= 2 for summation forms");
  if (layout.level_sizes.size() < 2) throw GeometryError("layout needs at least one device level");
  for (std::size_t i = 0; i + 1 < layout.level_sizes.size(); ++i) {
    if (layout.level_sizes[i] <= 0) throw GeometryError("level sizes must be positive");
    if (layout.level_sizes[i] * f != layout.level_sizes[i + 1]) {
      throw GeometryError("level " + std::to_string(i + 1) + " is not f times level " +
                          std::to_string(i));
    }
    if (!is_integral(layout.sl / layout.level_sizes[i])) {
      throw GeometryError("S_l / S_" + std::to_string(i) + " is not integral");
    }
  }
}

// Integer bracket 2l - 1 - al + afl in exact arithmetic.
Exact bracket(const Exact& a, std::int64_t f, int l) {
  return Exact(2 * l - 1) - a * l + a * f * l;
}

double bracket(double a, double f, double l) { return 2.0 * l - 1.0 - a * l + a * f * l; }

// Basic double summation over an arbitrary level vector.
Exact leveled_sum(const std::vector<Exact>& sizes, const Exact& last, const Exact& a,
                  std::int64_t f) {
  Exact total = 0;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const Exact& si = sizes[i];
    const std::int64_t merges = to_count(last / si, "S_l / S_i");
    total += Exact(merges) * si * (i == 0 ? 1 : 2);
    std::int64_t residue_sum = 0;
    for (std::int64_t j = 1; j <= merges; ++j) residue_sum += (j - 1) % f;
    total += 2 * a * Exact(residue_sum) * si;
  }
  return total;
}

}  // namespace

Exact exact_from_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  cpp_int digits = 0;
  int scale = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char ch = text[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits = digits * 10 + (ch - '0');
      if (seen_point) --scale;
      any_digit = true;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw DomainError("not a decimal number: '" + std::string(text) + "'");
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    const std::string exp_text{text.substr(pos)};
    std::size_t used = 0;
    int exp = 0;
    try {
      exp = std::stoi(exp_text, &used);
    } catch (const std::exception&) {
      throw DomainError("bad exponent in '" + std::string(text) + "'");
    }
    pos += used;
    scale += exp;
  }
  if (pos != text.size()) throw DomainError("not a decimal number: '" + std::string(text) + "'");
  Exact out(digits);
  if (scale > 0) out *= pow_exact(10, scale);
  if (scale < 0) out /= pow_exact(10, -scale);
  return negative ? Exact(-out) : out;
}

Exact exact_from_double(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value");
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  // 53-bit mantissa scaled to an integer.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Exact out{cpp_int(scaled)};
  if (exp > 0) out *= pow_exact(2, exp);
  if (exp < 0) out /= pow_exact(2, -exp);
  return out;
}

double to_double(const Exact& v) { return v.convert_to<double>(); }

ModelParams ModelParams::make(double a, double r, std::optional<double> f,
                              std::optional<double> l, std::optional<double> c, double p) {
  ModelParams out;
  out.a = a;
  out.r = r;
  out.p = p;
  const int given = int(f.has_value()) + int(l.has_value()) + int(c.has_value());
  if (given < 2) throw DomainError("two of f, l, C are required");
  if (f && l && c) {
    out.f = *f;
    out.l = *l;
    out.c = *c;
  } else if (f && l) {
    out.f = *f;
    out.l = *l;
    out.c = std::pow(*f, *l);
  } else if (f && c) {
    require_growth(*f);
    out.f = *f;
    out.c = *c;
    out.l = std::log(*c) / std::log(*f);
  } else {
    require_levels(*l);
    out.l = *l;
    out.c = *c;
    out.f = std::pow(*c, 1.0 / *l);
  }
  validate(out);
  return out;
}

void validate(const ModelParams& params) {
  require_unit_interval(params.a, "merge amplification a");
  require_throughput(params.r);
  require_growth(params.f);
  require_levels(params.l);
  if (!(params.p > 0.0)) throw DomainError("key-to-value ratio p must be positive");
  if (!(params.c > 1.0)) throw DomainError("dataset-to-memory ratio C must exceed 1");
  const double implied = std::pow(params.f, params.l);
  if (std::abs(implied - params.c) > 1e-6 * params.c) {
    throw DomainError("inconsistent f, l, C: f^l = " + std::to_string(implied) +
                      " but C = " + std::to_string(params.c));
  }
}

SizeLayout SizeLayout::geometric(const Exact& s0, std::int64_t f, int l) {
  return geometric(s0, f, l, s0);
}

SizeLayout SizeLayout::geometric(const Exact& s0, std::int64_t f, int l, const Exact& sst) {
  if (s0 <= 0) throw GeometryError("S_0 must be positive");
  if (f < 2) throw DomainError("growth factor f must be an integer >= 2");
  if (l < 1) throw DomainError("level count l must be at least 1");
  if (sst <= 0 || sst > s0) throw GeometryError("SST size must lie in (0, S_0]");
  SizeLayout out;
  out.s0 = s0;
  Exact size = s0;
  for (int i = 0; i <= l; ++i) {
    out.level_sizes.push_back(size);
    size *= f;
  }
  out.sl = out.level_sizes.back();
  out.kl = out.sl;
  out.vl = 0;
  out.sst = sst;
  return out;
}

SizeLayout SizeLayout::with_key_ratio(const Exact& p) const {
  if (p <= 0) throw DomainError("key-to-value ratio p must be positive");
  SizeLayout out = *this;
  out.kl = sl * p / (p + 1);
  out.vl = sl - out.kl;
  return out;
}

LsmParams LsmParams::uniform(double rate, double page, double f, int l) {
  LsmParams out;
  out.rate_r = rate;
  out.page_bytes = page;
  out.growth_factors.assign(static_cast<std::size_t>(l), f);
  return out;
}

Exact traffic_basic_sum(const SizeLayout& layout, const Exact& a, std::int64_t f) {
  check_layout_shape(layout, f);
  return leveled_sum(layout.level_sizes, layout.sl, a, f);
}

double traffic_basic_closed(double sl, double a, double f, double l) {
  require_growth(f);
  require_levels(l);
  return sl * bracket(a, f, l);
}

Exact traffic_basic_closed(const Exact& sl, const Exact& a, std::int64_t f, int l) {
  if (f < 2) throw DomainError("growth factor f must exceed 1");
  if (l < 1) throw DomainError("level count l must be at least 1");
  return sl * bracket(a, f, l);
}

double cost_ratio_basic(const ModelParams& params) {
  require_throughput(params.r);
  require_growth(params.f);
  require_levels(params.l);
  return bracket(params.a, params.f, params.l) / params.r;
}

Exact traffic_log_sum(const SizeLayout& layout, const Exact& a, std::int64_t f) {
  check_layout_shape(layout, f);
  if (layout.kl >= layout.sl) throw DomainError("key bytes must be smaller than the dataset");
  std::vector<Exact> keys;
  keys.reserve(layout.level_sizes.size());
  for (const Exact& s : layout.level_sizes) keys.push_back(s * layout.kl / layout.sl);
  if (layout.kl <= 0) return layout.sl;
  return leveled_sum(keys, layout.kl, a, f) + layout.sl;
}

double traffic_log_closed(double kl, double sl, double a, double f, double l) {
  if (!(kl < sl)) throw DomainError("key bytes must be smaller than the dataset");
  if (kl < 0) throw DomainError("key bytes must be non-negative");
  return kl * bracket(a, f, l) + sl;
}

Exact traffic_log_closed(const Exact& kl, const Exact& sl, const Exact& a, std::int64_t f,
                         int l) {
  if (kl >= sl) throw DomainError("key bytes must be smaller than the dataset");
  return kl * bracket(a, f, l) + sl;
}

double cost_ratio_log(const ModelParams& params) {
  require_throughput(params.r);
  if (!(params.p > 0.0)) throw DomainError("key-to-value ratio p must be positive");
  const double p = params.p;
  return (p * bracket(params.a, params.f, params.l) + p + 1.0) / (params.r * (p + 1.0));
}

double cost_ratio_tiering(double r, double l) {
  require_throughput(r);
  require_levels(l);
  return (2.0 * l - 1.0) / r;
}

double cost_ratio_tiering(double r, double f, double c) {
  require_growth(f);
  return cost_ratio_tiering(r, std::log(c) / std::log(f));
}

double cost_ratio_tiering_log(const ModelParams& params) {
  require_throughput(params.r);
  if (!(params.p > 0.0)) throw DomainError("key-to-value ratio p must be positive");
  const double p = params.p;
  return (p * (2.0 * params.l - 1.0) + p + 1.0) / (params.r * (p + 1.0));
}

Exact traffic_per_sst_sum(const SizeLayout& layout, const Exact& a, std::int64_t f) {
  check_layout_shape(layout, f);
  const Exact& b = layout.sst;
  if (b <= 0) throw GeometryError("SST size must be positive");
  Exact total = 0;
  const int l = layout.levels();
  for (int i = 0; i < l; ++i) {
    const Exact& si = layout.level_sizes[static_cast<std::size_t>(i)];
    if (!is_integral(si / b)) {
      throw GeometryError("S_" + std::to_string(i) + " / B is not integral");
    }
    const std::int64_t ssts = to_count(si / b, "S_i / B");
    const std::int64_t merges = to_count(layout.sl / si, "S_l / S_i");
    const std::int64_t moves = merges * ssts;
    total += Exact(moves) * b * (i == 0 ? 1 : 2);

    const std::int64_t filling = f * ssts;
    cpp_int k_sum = 0;
    for (std::int64_t k = 1; k <= filling; ++k) k_sum += k;
    const Exact fill_term = Exact(k_sum) / ssts;
    const Exact steady_term = Exact(f * (moves - filling));
    total += 2 * a * (fill_term + steady_term) * b;
  }
  // The last level is never moved, so its SST count must still divide evenly.
  if (!is_integral(layout.sl / b)) throw GeometryError("S_l / B is not integral");
  return total;
}

double traffic_per_sst_closed(double sl, double a, double f, double l, double sst) {
  require_growth(f);
  require_levels(l);
  const double geometric = (1.0 - std::pow(f, -l)) / (1.0 - 1.0 / f);
  return sl * (2.0 * l - 1.0 + a * f * l * sst / sl + 2.0 * a * f * l - a * f * geometric);
}

Exact traffic_per_sst_closed(const Exact& sl, const Exact& a, std::int64_t f, int l,
                             const Exact& sst) {
  if (f < 2) throw DomainError("growth factor f must exceed 1");
  if (l < 1) throw DomainError("level count l must be at least 1");
  const Exact inv_f = Exact(1) / f;
  const Exact geometric = (1 - Exact(1) / pow_exact(f, l)) / (1 - inv_f);
  return sl * (Exact(2 * l - 1) + a * f * l * sst / sl + 2 * a * f * l - a * f * geometric);
}

double cost_ratio_from_bytes(double d_bytes, double sl_bytes, double r) {
  if (!(sl_bytes > 0.0)) throw DomainError("dataset size S_l must be positive");
  if (!(r > 0.0)) throw DomainError("achieved throughput r must be positive");
  return d_bytes / (r * sl_bytes);
}

TrafficEstimate make_estimate(double d_bytes, double sl_bytes, double r) {
  return TrafficEstimate{d_bytes, cost_ratio_from_bytes(d_bytes, sl_bytes, r)};
}

double cost_ratio(const Design& design, const ModelParams& params, double sst_over_sl) {
  if (design.is_tiering()) {
    return design.uses_log() ? cost_ratio_tiering_log(params)
                             : cost_ratio_tiering(params.r, params.l);
  }
  if (design.per_sst()) {
    require_throughput(params.r);
    if (!(sst_over_sl > 0.0 && sst_over_sl <= 1.0)) {
      throw DomainError("per-SST designs need 0 < B / S_l <= 1");
    }
    const double x = traffic_per_sst_closed(1.0, params.a, params.f, params.l, sst_over_sl);
    if (!design.uses_log()) return x / params.r;
    const double p = params.p;
    return (p * x + p + 1.0) / (params.r * (p + 1.0));
  }
  return design.uses_log() ? cost_ratio_log(params) : cost_ratio_basic(params);
}

double space_amplification(double f, double l) {
  require_growth(f);
  require_levels(l);
  // sum_{i=1..l} f^-i in closed form, valid for real l.
  return (1.0 - std::pow(f, -l)) / (f - 1.0);
}

double log_benefit_limit(double p) {
  if (!(p > 0.0)) throw DomainError("key-to-value ratio p must be positive");
  return (p + 1.0) / (2.0 * p + 1.0);
}

double single_level_projection(double l) {
  require_levels(l);
  return 2.0 * l - 1.0;
}

double lsm_page_rate(const LsmParams& params) {
  if (!(params.rate_r > 0.0)) throw DomainError("incoming rate R must be positive");
  if (!(params.page_bytes > 0.0)) throw DomainError("page size S_p must be positive");
  if (params.growth_factors.empty()) throw DomainError("at least one level is required");
  double sum = 0.0;
  for (double f : params.growth_factors) {
    require_growth(f);
    sum += f;
  }
  const double l = static_cast<double>(params.levels());
  return params.rate_r / params.page_bytes * (2.0 * sum + 2.0 * l - 1.0);
}

}  // namespace vat
