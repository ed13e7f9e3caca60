#include "vat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "vat/calibration.hpp"
#include "vat/errors.hpp"
#include "vat/model.hpp"
#include "vat/optimizer.hpp"
#include "vat/simulator.hpp"
#include "vat/sweep.hpp"

namespace vat {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr const char* kDesignMatrix =
    "design matrix (cost ratio T/T_opt, X = 2l - 1 - al + afl):\n"
    "  leveling              X / r                                  a, r, two of f/l/c\n"
    "  leveling --log        (pX + p + 1) / (r(p + 1))              a, r, p, two of f/l/c\n"
    "  leveling --per-sst    per-SST traffic / (r S_l)              a, r, two of f/l/c, --sst, --sl\n"
    "  tiering               (2l - 1) / r                           r, l (no a)\n"
    "  tiering --log         (p(2l - 1) + p + 1) / (r(p + 1))       r, l, p (no a)\n";

struct Globals {
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::string out;
};

struct DesignFlags {
  std::string name = "leveling";
  bool log = false;
  bool per_sst = false;

  Design resolve() const {
    Design d;
    try {
      d = parse_design(name);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    if (log) d.placement = Placement::value_log;
    if (per_sst) d.granularity = Granularity::per_sst;
    return d;
  }
};

struct ParamFlags {
  std::optional<double> a, r, p, f, l, c;
};

void add_design_flags(CLI::App* cmd, DesignFlags& d, const std::string& prefix = "") {
  cmd->add_option("--" + prefix + "design", d.name, "leveling | tiering (or leveling-log, ...)")
      ->capture_default_str();
  cmd->add_flag("--" + prefix + "log", d.log, "values in a separate log");
  cmd->add_flag("--" + prefix + "per-sst", d.per_sst, "per-SST compaction granularity");
}

void add_param_flags(CLI::App* cmd, ParamFlags& p) {
  cmd->add_option("--a", p.a, "merge amplification in [0, 1]");
  cmd->add_option("--r", p.r, "achieved fraction of sequential throughput (default 1)");
  cmd->add_option("--p", p.p, "key-to-value byte ratio (log designs)");
  cmd->add_option("--f", p.f, "growth factor");
  cmd->add_option("--l", p.l, "number of levels");
  cmd->add_option("--c", p.c, "dataset-to-memory ratio S_l / S_0");
}

ParamMap to_map(const ParamFlags& p) {
  ParamMap m;
  if (p.a) m["a"] = *p.a;
  if (p.r) m["r"] = *p.r;
  if (p.p) m["p"] = *p.p;
  if (p.f) m["f"] = *p.f;
  if (p.l) m["l"] = *p.l;
  if (p.c) m["c"] = *p.c;
  return m;
}

// Tiering excludes a; value-log designs need p and in-place designs reject it.
void check_flag_combination(const Design& d, const ParamFlags& p, bool p_swept = false) {
  std::string problem;
  if (d.is_tiering() && p.a) problem = "tiering does not take --a";
  else if (d.is_tiering() && d.per_sst()) problem = "--per-sst applies to leveling only";
  else if (d.uses_log() && !p.p && !p_swept) problem = "value-log designs require --p";
  else if (!d.uses_log() && p.p) problem = "--p only applies with --log";
  if (!problem.empty()) throw UsageError(problem + "\n" + kDesignMatrix);
}

std::string num(double v) { return format_number(v); }

Axis axis_flag(const std::string& text) {
  try {
    return parse_axis(text);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--axis: ") + e.what());
  }
}

void write_record(std::ostream& out, const Json& record, const Globals& g) {
  if (g.format == "json") {
    out << record.dump(2) << '\n';
    return;
  }
  std::string header;
  std::string values;
  for (const auto& [key, value] : record.items()) {
    if (value.is_array() || value.is_object()) continue;
    if (!header.empty()) {
      header += ',';
      values += ',';
    }
    header += key;
    if (value.is_string()) values += value.get<std::string>();
    else if (value.is_number_float()) values += num(value.get<double>());
    else if (value.is_null()) values += "";
    else values += value.dump();
  }
  out << header << '\n' << values << '\n';
}

void write_table(std::ostream& out, const Table& table, const Globals& g) {
  if (g.format == "json") write_json(out, table);
  else write_csv(out, table);
}

void report_skipped(std::ostream& err, const std::vector<std::string>& skipped) {
  for (const auto& s : skipped) err << "skipped " << s << '\n';
}

std::uint64_t size_flag(const std::string& text, const std::string& flag) {
  try {
    return parse_size(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

// --- eval ----------------------------------------------------------------------

struct EvalArgs {
  DesignFlags design;
  ParamFlags params;
  std::string sst;
  std::string sl;
};

Json cmd_eval(const EvalArgs& args) {
  const Design d = args.design.resolve();
  check_flag_combination(d, args.params);
  if (d.per_sst() && (args.sst.empty() || args.sl.empty())) {
    throw UsageError(std::string("--per-sst requires --sst and --sl\n") + kDesignMatrix);
  }
  ParamMap m = to_map(args.params);
  // Tiering depends on l alone.
  const bool l_only = d.is_tiering() && args.params.l && !args.params.f && !args.params.c;
  if (l_only) m["f"] = 2.0;
  const ModelParams params = resolve_params(m);
  std::optional<double> sl;
  if (!args.sl.empty()) sl = static_cast<double>(size_flag(args.sl, "--sl"));
  double sst_ratio = 0.0;
  if (d.per_sst()) sst_ratio = static_cast<double>(size_flag(args.sst, "--sst")) / *sl;
  const double ratio = cost_ratio(d, params, sst_ratio);

  Json rec;
  rec["design"] = to_string(d);
  if (!d.is_tiering()) rec["a"] = params.a;
  rec["r"] = params.r;
  if (!l_only) {
    rec["f"] = params.f;
    rec["c"] = params.c;
  }
  rec["l"] = params.l;
  if (d.uses_log()) rec["p"] = params.p;
  rec["cost_ratio"] = ratio;
  if (sl) rec["d_bytes"] = ratio * params.r * *sl;
  if (!l_only) rec["space_amplification"] = space_amplification(params.f, params.l);
  return rec;
}

// --- sweep ---------------------------------------------------------------------

struct SweepArgs {
  DesignFlags design;
  ParamFlags params;
  std::optional<double> sst_ratio;
  std::vector<std::string> axes;
  std::string preset;
};

Table cmd_sweep(const SweepArgs& args) {
  if (!args.preset.empty()) {
    if (!args.axes.empty()) throw UsageError("--preset cannot be combined with --axis");
    const auto names = figure_preset_names();
    if (std::find(names.begin(), names.end(), args.preset) == names.end()) {
      std::string known;
      for (const auto& n : names) known += " " + n;
      throw UsageError("unknown preset '" + args.preset + "'; known:" + known);
    }
    return figure_preset(args.preset);
  }
  if (args.axes.empty()) throw UsageError("sweep needs --axis name=values or --preset");
  if (args.axes.size() > 2) throw UsageError("at most two --axis flags");
  SweepSpec spec;
  spec.design = args.design.resolve();
  bool p_swept = false;
  for (const auto& text : args.axes) {
    spec.axes.push_back(axis_flag(text));
    p_swept = p_swept || spec.axes.back().name == "p";
    if (spec.design.is_tiering() && spec.axes.back().name == "a") {
      throw UsageError(std::string("tiering does not take a\n") + kDesignMatrix);
    }
  }
  check_flag_combination(spec.design, args.params, p_swept);
  spec.fixed = to_map(args.params);
  if (args.sst_ratio) spec.fixed["sst"] = *args.sst_ratio;
  return run_sweep(spec);
}

// --- optimize --------------------------------------------------------------------

struct OptimizeArgs {
  DesignFlags design;
  ParamFlags params;
  std::optional<double> sst_ratio;
  int l_min = 1;
  int l_max = 30;
  bool simplified = false;
  std::string constraint = "c";
  std::optional<int> levels;
  std::optional<double> anchor;
  std::string total;
  std::string s0;
};

std::string lambert_note() {
  const double w = lambert_w0(1.0 / std::exp(1.0)).w0;
  return "W(1/e) = " + num(w) + " (principal branch); the rounded value 0.5 gives l = ln C / 1.5, f = e^1.5 = " +
         num(std::exp(1.5)) + " instead of l = ln C / " + num(w + 1.0) + ", f = " + num(std::exp(w + 1.0));
}

void emit_schedule(std::ostream& out, const GrowthSchedule& s, const Globals& g) {
  if (g.format == "json") {
    Json rec;
    rec["constraint"] = "total-size";
    rec["levels"] = s.factors.size();
    rec["factors"] = s.factors;
    rec["lagrange_multiplier"] = s.lagrange_multiplier;
    rec["total_bytes"] = s.total_bytes;
    rec["s0_bytes"] = s.s0_bytes;
    out << rec.dump(2) << '\n';
    return;
  }
  out << "# lagrange_multiplier=" << num(s.lagrange_multiplier) << " total_bytes=" << num(s.total_bytes)
      << " s0_bytes=" << num(s.s0_bytes) << '\n';
  out << "level,growth_factor\n";
  for (std::size_t i = 0; i < s.factors.size(); ++i) out << i + 1 << ',' << num(s.factors[i]) << '\n';
}

void cmd_optimize(const OptimizeArgs& args, std::ostream& out, const Globals& g) {
  if (args.constraint == "total-size") {
    if (!args.levels) throw UsageError("--constraint total-size requires --levels");
    const double s0 = args.s0.empty() ? 1.0 : static_cast<double>(size_flag(args.s0, "--s0"));
    double total = 0;
    if (args.anchor) {
      if (!args.total.empty()) throw UsageError("give either --anchor or --total, not both");
      total = schedule_total_bytes(growth_schedule_from_anchor(*args.levels, *args.anchor), s0);
    } else if (!args.total.empty()) {
      total = static_cast<double>(size_flag(args.total, "--total"));
    } else {
      throw UsageError("--constraint total-size requires --anchor f_l or --total");
    }
    emit_schedule(out, growth_schedule_constant_total(*args.levels, total, s0), g);
    return;
  }
  if (args.levels || args.anchor || !args.total.empty()) {
    throw UsageError("--levels, --anchor and --total apply to --constraint total-size");
  }
  const double c = args.params.c.value_or(1000.0);
  if (args.simplified) {
    const LevelsAndGrowth s = optimal_levels_simplified(c);
    Json rec;
    rec["rule"] = "simplified";
    rec["c"] = c;
    rec["levels"] = s.levels;
    rec["growth"] = s.growth;
    rec["objective"] = s.levels * std::pow(c, 1.0 / s.levels);
    write_record(out, rec, g);
    return;
  }
  const Design d = args.design.resolve();
  check_flag_combination(d, args.params);
  if (args.params.f || args.params.l) throw UsageError("optimize scans l and f; give --c instead");
  MinimizeRequest req;
  req.design = d;
  req.a = args.params.a.value_or(1.0);
  req.r = args.params.r.value_or(1.0);
  req.p = args.params.p.value_or(1.0);
  req.c = c;
  req.l_min = args.l_min;
  req.l_max = args.l_max;
  req.sst_over_sl = args.sst_ratio.value_or(0.0);
  const OptimizationResult res = minimize_cost_ratio(req);

  if (g.format == "json") {
    Json rec;
    rec["design"] = to_string(d);
    rec["c"] = c;
    rec["levels"] = res.levels;
    rec["growth"] = res.growth;
    rec["objective"] = res.objective;
    if (res.real_levels > 0) {
      const LevelsAndGrowth exact = optimal_levels_constant_c_exact(c);
      const LevelsAndGrowth rounded = optimal_levels_constant_c_rounded(c);
      rec["real_levels"] = exact.levels;
      rec["real_growth"] = exact.growth;
      rec["rounded_levels"] = rounded.levels;
      rec["rounded_growth"] = rounded.growth;
      rec["note"] = lambert_note();
    }
    Json curve = Json::array();
    for (const CurvePoint& p : res.curve) curve.push_back({{"l", p.levels}, {"f", p.growth}, {"cost_ratio", p.objective}});
    rec["curve"] = std::move(curve);
    out << rec.dump(2) << '\n';
    return;
  }
  out << "# optimum design=" << to_string(d) << " levels=" << res.levels << " growth=" << num(res.growth)
      << " objective=" << num(res.objective) << '\n';
  if (res.real_levels > 0) {
    const LevelsAndGrowth exact = optimal_levels_constant_c_exact(c);
    out << "# real optimum levels=" << num(exact.levels) << " growth=" << num(exact.growth) << '\n';
    out << "# note: " << lambert_note() << '\n';
  }
  out << "l,f,cost_ratio\n";
  for (const CurvePoint& p : res.curve) out << p.levels << ',' << num(p.growth) << ',' << num(p.objective) << '\n';
}

// --- simulate --------------------------------------------------------------------

struct SimulateArgs {
  std::string mode = "counters";
  DesignFlags design;
  int growth = 10;
  int levels = 3;
  std::string s0 = "64MiB";
  std::string sst;
  std::optional<double> a;
  double p = 0.01;
  std::string dataset;
  bool truncate = false;
  bool no_drain = false;
  bool no_check = false;
  std::string pick = "round-robin";
  std::uint64_t pairs = 0;
  std::uint32_t key_bytes = 3;
  std::uint32_t value_bytes = 1079;
  std::string dist = "uniform";
  double theta = kDefaultZipfTheta;
  std::uint64_t universe = std::uint64_t{1} << 24;
  std::uint64_t group = 0;
  std::string emit_trace;
};

Json level_json(const std::vector<LevelStats>& levels) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    arr.push_back({{"level", i},
                   {"compactions", levels[i].compactions},
                   {"bytes_read", levels[i].bytes_read},
                   {"bytes_written", levels[i].bytes_written},
                   {"resident_bytes", levels[i].resident_bytes}});
  }
  return arr;
}

Json cmd_simulate(const SimulateArgs& args, const Globals& g, std::ostream& err) {
  SimConfig config;
  config.design = args.design.resolve();
  config.growth = args.growth;
  config.levels = args.levels;
  config.s0_bytes = size_flag(args.s0, "--s0");
  config.sst_bytes = args.sst.empty() ? config.s0_bytes : size_flag(args.sst, "--sst");
  config.a_override = args.a;
  config.key_ratio = args.p;
  config.allow_truncate = args.truncate;
  config.drain_at_end = !args.no_drain;
  config.check_invariants = !args.no_check;
  config.pick = parse_pick_policy(args.pick);

  SimReport report;
  if (args.mode == "counters") {
    if (!args.emit_trace.empty()) throw UsageError("--emit-trace requires --mode ssts");
    if (args.pairs) throw UsageError("--pairs applies to --mode ssts; use --dataset");
    std::uint64_t dataset = 0;
    if (!args.dataset.empty()) {
      dataset = size_flag(args.dataset, "--dataset");
    } else {
      dataset = config.s0_bytes;
      for (int i = 0; i < config.levels; ++i) dataset *= static_cast<std::uint64_t>(config.growth);
    }
    report = simulate_counters(config, dataset);
  } else {
    if (args.a) throw UsageError("--a applies to --mode counters; SST mode measures a");
    if (!args.dataset.empty()) throw UsageError("--dataset applies to --mode counters; use --pairs");
    if (args.pairs == 0) throw UsageError("--mode ssts requires --pairs");
    WorkloadSpec w;
    w.num_pairs = args.pairs;
    w.key_bytes = args.key_bytes;
    w.value_bytes = args.value_bytes;
    w.distribution = parse_distribution(args.dist);
    w.zipf_theta = args.theta;
    w.key_universe = args.universe;
    w.seed = g.seed;
    w.group_pairs = args.group;
    report = simulate_ssts(w, config);
    if (!args.emit_trace.empty()) {
      std::ofstream trace(args.emit_trace);
      if (!trace) throw IoError("cannot write trace file '" + args.emit_trace + "'");
      write_trace(trace, report.trace);
      if (!trace) throw IoError("error writing trace file '" + args.emit_trace + "'");
    }
  }
  for (const auto& n : report.notes) err << "note: " << n << '\n';

  Json rec;
  rec["mode"] = args.mode;
  rec["design"] = to_string(config.design);
  rec["dataset_bytes"] = report.dataset_bytes;
  rec["bytes_read"] = report.bytes_read;
  rec["bytes_written"] = report.bytes_written;
  rec["amplification"] = report.amplification;
  rec["write_amplification"] = report.write_amplification;
  rec["measured_a"] = report.measured_a;
  rec["measured_a_clamped"] = report.measured_a_clamped;
  rec["a_samples"] = report.a_samples;
  rec["steps"] = report.steps;
  rec["effective_levels"] = report.effective_levels;
  rec["truncated_fraction"] = report.truncated_fraction;
  rec["levels"] = level_json(report.levels);
  rec["notes"] = report.notes;
  return rec;
}

// --- calibrate -------------------------------------------------------------------

struct CalibrateArgs {
  std::string trace;
  bool lenient = false;
  bool weighted = false;
  bool empty_as_zero = false;
  std::string profile;
  std::string request_bytes;
  std::uint32_t queue_depth = kDefaultQueueDepth;
  std::string preset;
};

Json cmd_calibrate(const CalibrateArgs& args, std::ostream& err) {
  const int sources = int(!args.trace.empty()) + int(!args.profile.empty()) + int(!args.preset.empty());
  if (sources != 1) throw UsageError("calibrate needs exactly one of --trace, --profile, --preset");
  Json rec;
  if (!args.trace.empty()) {
    const TraceReadResult read = read_trace_file(args.trace, args.lenient);
    for (const auto& p : read.problems) err << "warning: " << args.trace << ": " << p << '\n';
    EstimateOptions opt;
    opt.weighting = args.weighted ? Weighting::bytes : Weighting::unweighted;
    opt.empty_lower_as_zero = args.empty_as_zero;
    const TraceStats stats = estimate_a(read.records, opt);
    rec["source"] = args.trace;
    rec["records"] = read.records.size();
    rec["skipped_lines"] = read.problems.size();
    rec["samples"] = stats.samples;
    rec["empty_lower"] = stats.empty_lower;
    rec["weighting"] = args.weighted ? "bytes" : "unweighted";
    rec["mean_raw"] = stats.mean_raw;
    rec["mean_clamped"] = stats.mean_clamped;
    rec["a"] = stats.mean_clamped;
    return rec;
  }
  if (!args.profile.empty()) {
    if (args.request_bytes.empty()) throw UsageError("--profile requires --request-bytes");
    const DeviceProfile profile = read_profile_file(args.profile);
    const std::uint64_t request = size_flag(args.request_bytes, "--request-bytes");
    rec["profile"] = profile.name;
    rec["request_bytes"] = request;
    rec["queue_depth"] = args.queue_depth;
    rec["r"] = estimate_r(profile, request, args.queue_depth);
    return rec;
  }
  const SystemPreset& p = lookup_preset(args.preset);
  rec["name"] = p.name;
  rec["design"] = to_string(p.design);
  rec["a"] = p.a;
  rec["r"] = p.r;
  rec["growth"] = p.growth;
  return rec;
}

// --- compare ---------------------------------------------------------------------

struct CompareArgs {
  DesignFlags baseline;
  DesignFlags alternative;
  ParamFlags params;
  std::optional<double> sst_ratio;
  std::optional<double> alt_a, alt_r, alt_p;
  std::string axis;
};

Table cmd_compare(const CompareArgs& args) {
  CompareSpec spec;
  spec.baseline = args.baseline.resolve();
  spec.alternative = args.alternative.resolve();
  spec.axis = axis_flag(args.axis);
  const bool both_tiering = spec.baseline.is_tiering() && spec.alternative.is_tiering();
  const bool any_log = spec.baseline.uses_log() || spec.alternative.uses_log();
  const bool p_given = args.params.p || args.alt_p || spec.axis.name == "p";
  if (both_tiering && (args.params.a || spec.axis.name == "a")) {
    throw UsageError(std::string("tiering does not take a\n") + kDesignMatrix);
  }
  if (any_log && !p_given) throw UsageError(std::string("value-log designs require --p\n") + kDesignMatrix);
  if (!any_log && args.params.p) throw UsageError(std::string("--p only applies with --log\n") + kDesignMatrix);
  spec.fixed = to_map(args.params);
  if (args.sst_ratio) spec.fixed["sst"] = *args.sst_ratio;
  if (args.alt_a) spec.alternative_overrides["a"] = *args.alt_a;
  if (args.alt_r) spec.alternative_overrides["r"] = *args.alt_r;
  if (args.alt_p) spec.alternative_overrides["p"] = *args.alt_p;
  const ComparisonReport report = run_compare(spec);

  Table table = report.to_table();
  table.label_column = "kind";
  table.labels.assign(table.rows.size(), "point");
  if (report.log_limit) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    // a -> 0, l = 1 limit of in-place over log.
    table.add({nan, nan, nan, *report.log_limit}, "log-limit");
  }
  return table;
}

void add_globals(CLI::App& app, Globals& g) {
  app.add_option("--format", g.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--seed", g.seed, "workload seed")->capture_default_str();
  app.add_option("--out", g.out, "write results to this file instead of stdout");
  app.set_config("--config", "", "TOML file mirroring flag names ([eval], [simulate], ... sections); flags win");
}

void emit(const std::string& text, const Globals& g, std::ostream& out) {
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(g.out);
  if (!file) throw IoError("cannot write output file '" + g.out + "'");
  file << text;
  if (!file) throw IoError("error writing output file '" + g.out + "'");
}

}  // namespace

std::uint64_t parse_size(const std::string& text) {
  std::size_t pos = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == 0) throw std::invalid_argument("bad size '" + text + "'");
  const std::string suffix = text.substr(pos);
  unsigned shift = 0;
  if (suffix.empty() || suffix == "B") shift = 0;
  else if (suffix == "KiB") shift = 10;
  else if (suffix == "MiB") shift = 20;
  else if (suffix == "GiB") shift = 30;
  else if (suffix == "TiB") shift = 40;
  else throw std::invalid_argument("bad size suffix in '" + text + "' (expected KiB, MiB, GiB or TiB)");
  std::uint64_t value = 0;
  try {
    value = std::stoull(text.substr(0, pos));
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("size '" + text + "' is too large");
  }
  if (shift && value > (std::numeric_limits<std::uint64_t>::max() >> shift)) {
    throw std::invalid_argument("size '" + text + "' is too large");
  }
  return value << shift;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-level KV store I/O amplification models, optimizer, simulator and calibration", "vat"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  add_globals(app, g);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "cost ratio of one design point");
  add_design_flags(eval_cmd, eval.design);
  add_param_flags(eval_cmd, eval.params);
  eval_cmd->add_option("--sst", eval.sst, "SST size B (per-SST designs)");
  eval_cmd->add_option("--sl", eval.sl, "dataset size S_l; adds the traffic D in bytes");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "cost ratio over a grid of up to two axes");
  add_design_flags(sweep_cmd, sweep.design);
  add_param_flags(sweep_cmd, sweep.params);
  sweep_cmd->add_option("--sst-ratio", sweep.sst_ratio, "B / S_l for per-SST designs");
  sweep_cmd->add_option("--axis", sweep.axes, "name=start:stop[:step] or name=v1,v2,...");
  sweep_cmd->add_option("--preset", sweep.preset, "fig2a, fig2b, fig5a, fig5b, fig6a, fig6b, fig7a, fig7b");

  OptimizeArgs opt;
  auto* opt_cmd = app.add_subcommand("optimize", "level count and growth factors minimizing the cost ratio");
  add_design_flags(opt_cmd, opt.design);
  add_param_flags(opt_cmd, opt.params);
  opt_cmd->add_option("--sst-ratio", opt.sst_ratio, "B / S_l for per-SST designs");
  opt_cmd->add_option("--l-min", opt.l_min)->capture_default_str();
  opt_cmd->add_option("--l-max", opt.l_max)->capture_default_str();
  opt_cmd->add_flag("--simplified", opt.simplified, "l = ln C, f = e");
  opt_cmd->add_option("--constraint", opt.constraint, "c | total-size")
      ->check(CLI::IsMember({"c", "total-size"}))
      ->capture_default_str();
  opt_cmd->add_option("--levels", opt.levels, "level count (total-size)");
  opt_cmd->add_option("--anchor", opt.anchor, "last growth factor f_l (total-size)");
  opt_cmd->add_option("--total", opt.total, "total size S_0 + ... + S_l (total-size)");
  opt_cmd->add_option("--s0", opt.s0, "memory level size (total-size, default 1)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "replay compaction and count device traffic");
  sim_cmd->add_option("--mode", sim.mode, "counters | ssts")
      ->check(CLI::IsMember({"counters", "ssts"}))
      ->capture_default_str();
  add_design_flags(sim_cmd, sim.design);
  sim_cmd->add_option("--f", sim.growth, "integer growth factor")->capture_default_str();
  sim_cmd->add_option("--l", sim.levels, "on-device levels")->capture_default_str();
  sim_cmd->add_option("--s0", sim.s0, "memory level size")->capture_default_str();
  sim_cmd->add_option("--sst", sim.sst, "SST size (default S_0)");
  sim_cmd->add_option("--a", sim.a, "merge amplification (counters)");
  sim_cmd->add_option("--p", sim.p, "key-to-value ratio (counters, log designs)")->capture_default_str();
  sim_cmd->add_option("--dataset", sim.dataset, "dataset size (counters, default f^l S_0)");
  sim_cmd->add_flag("--truncate", sim.truncate, "use the largest perfect geometry within --dataset");
  sim_cmd->add_flag("--no-drain", sim.no_drain, "skip the final drain to the last level");
  sim_cmd->add_flag("--no-check", sim.no_check, "skip per-merge invariant checks (ssts)");
  sim_cmd->add_option("--pick", sim.pick, "round-robin | min-overlap (ssts)")->capture_default_str();
  sim_cmd->add_option("--pairs", sim.pairs, "number of inserted pairs (ssts)");
  sim_cmd->add_option("--key-bytes", sim.key_bytes)->capture_default_str();
  sim_cmd->add_option("--value-bytes", sim.value_bytes)->capture_default_str();
  sim_cmd->add_option("--dist", sim.dist, "uniform | zipf | sorted | sorted-stride")->capture_default_str();
  sim_cmd->add_option("--theta", sim.theta, "zipf skew")->capture_default_str();
  sim_cmd->add_option("--universe", sim.universe, "key universe size")->capture_default_str();
  sim_cmd->add_option("--group", sim.group, "pairs per group (sorted-stride)");
  sim_cmd->add_option("--emit-trace", sim.emit_trace, "write the compaction trace (JSON lines)");

  CalibrateArgs cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "estimate a from a trace or r from a device profile");
  cal_cmd->add_option("--trace", cal.trace, "compaction trace (JSON lines)");
  cal_cmd->add_flag("--lenient", cal.lenient, "skip malformed trace lines instead of failing");
  cal_cmd->add_flag("--weighted", cal.weighted, "weight records by bytes moved");
  cal_cmd->add_flag("--empty-as-zero", cal.empty_as_zero, "count merges into an empty level as a = 0");
  cal_cmd->add_option("--profile", cal.profile, "device throughput profile (CSV)");
  cal_cmd->add_option("--request-bytes", cal.request_bytes, "I/O request size");
  cal_cmd->add_option("--queue-depth", cal.queue_depth)->capture_default_str();
  cal_cmd->add_option("--preset", cal.preset, "RocksDB, Kreon, BlobDB, PebblesDB");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "benefit of an alternative design over a baseline");
  add_design_flags(cmp_cmd, cmp.baseline);
  add_design_flags(cmp_cmd, cmp.alternative, "alt-");
  add_param_flags(cmp_cmd, cmp.params);
  cmp_cmd->add_option("--sst-ratio", cmp.sst_ratio, "B / S_l for per-SST designs");
  cmp_cmd->add_option("--alt-a", cmp.alt_a, "a for the alternative design");
  cmp_cmd->add_option("--alt-r", cmp.alt_r, "r for the alternative design");
  cmp_cmd->add_option("--alt-p", cmp.alt_p, "p for the alternative design");
  cmp_cmd->add_option("--axis", cmp.axis, "name=values")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::FileError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::ostringstream buffer;
    if (eval_cmd->parsed()) {
      write_record(buffer, cmd_eval(eval), g);
    } else if (sweep_cmd->parsed()) {
      const Table t = cmd_sweep(sweep);
      report_skipped(err, t.skipped);
      write_table(buffer, t, g);
    } else if (opt_cmd->parsed()) {
      cmd_optimize(opt, buffer, g);
    } else if (sim_cmd->parsed()) {
      write_record(buffer, cmd_simulate(sim, g, err), g);
    } else if (cal_cmd->parsed()) {
      write_record(buffer, cmd_calibrate(cal, err), g);
    } else if (cmp_cmd->parsed()) {
      const Table t = cmd_compare(cmp);
      report_skipped(err, t.skipped);
      write_table(buffer, t, g);
    }
    emit(buffer.str(), g, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace vat
