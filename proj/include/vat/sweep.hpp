#pragma once

// Grid evaluation of the cost models and design comparisons, plus the named
// figure presets. Output is a plain table that the CLI renders as CSV or JSON.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vat/design.hpp"
#include "vat/model.hpp"

namespace vat {

// Parameter names understood by sweeps: a, r, p, f, l, c, sst (= B / S_l).
using ParamMap = std::map<std::string, double>;

struct Axis {
  std::string name;
  std::vector<double> values;
};

// "1:10" (step 1), "0.1:1:0.1", or "1,2,4,8".
std::vector<double> parse_axis_values(const std::string& text);
// "name=values"
Axis parse_axis(const std::string& text);

struct SweepSpec {
  Design design;
  ParamMap fixed;
  std::vector<Axis> axes;  // at most two
};

struct Table {
  std::vector<std::string> columns;
  // Optional leading text column (e.g. the series name of a preset).
  std::string label_column;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> skipped;  // out-of-domain grid points

  void add(std::vector<double> row, std::string label = {});
};

// Resolves a parameter set from fixed values plus one grid point. Any two of
// f, l, C determine the third.
ModelParams resolve_params(const ParamMap& values);

// Rows in lexicographic grid order (first axis outermost); columns are the
// axis names followed by cost_ratio. Out-of-domain points are skipped and
// listed in `skipped`.
Table run_sweep(const SweepSpec& spec);

struct CompareSpec {
  Design baseline;
  Design alternative;
  ParamMap fixed;
  ParamMap alternative_overrides;
  Axis axis;
};

struct ComparisonPoint {
  double axis_value = 0;
  double baseline = 0;
  double alternative = 0;
  double benefit = 0;  // baseline / alternative
};

struct ComparisonReport {
  Design baseline;
  Design alternative;
  ParamMap baseline_params;
  ParamMap alternative_params;
  std::string axis;
  std::vector<ComparisonPoint> points;
  std::vector<std::string> skipped;
  // (p + 1) / (2p + 1): in-place over log at a -> 0, l = 1.
  std::optional<double> log_limit;

  Table to_table() const;
};

ComparisonReport run_compare(const CompareSpec& spec);

// fig2a, fig2b, fig5a, fig5b, fig6a, fig6b, fig7a, fig7b.
std::vector<std::string> figure_preset_names();
Table figure_preset(const std::string& name);

// Shortest representation that round-trips the double.
std::string format_number(double v);
void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);

}  // namespace vat
