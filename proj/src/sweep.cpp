#include "vat/sweep.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "vat/errors.hpp"
#include "vat/optimizer.hpp"

namespace vat {

namespace {

const std::vector<std::string> kParamNames = {"a", "r", "p", "f", "l", "c", "sst"};

bool known_param(const std::string& name) {
  for (const auto& n : kParamNames) {
    if (n == name) return true;
  }
  return false;
}

double parse_double(const std::string& text) {
  double v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw DomainError("not a number: '" + text + "'");
  return v;
}

// start + k * step rounded to 12 significant digits.
double snap(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::optional<double> get(const ParamMap& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

double evaluate(const Design& design, const ParamMap& values) {
  if (design.uses_log() && !values.count("p")) {
    throw DomainError("value-log designs need p");
  }
  const ModelParams params = resolve_params(values);
  const double sst = get(values, "sst").value_or(0.0);
  return cost_ratio(design, params, sst);
}

// Cartesian product in lexicographic order, first axis outermost.
void for_each_point(const std::vector<Axis>& axes, const std::function<void(const std::vector<double>&)>& fn) {
  std::vector<double> point(axes.size());
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (depth == axes.size()) {
      fn(point);
      return;
    }
    for (double v : axes[depth].values) {
      point[depth] = v;
      rec(depth + 1);
    }
  };
  rec(0);
}

std::vector<double> range(double start, double stop, double step) {
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double v = snap(start + k * step);
    if (v > stop + 1e-12 * std::abs(stop)) break;
    out.push_back(v);
  }
  return out;
}

std::string describe_point(const std::vector<Axis>& axes, const std::vector<double>& point) {
  std::string s;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (i) s += ",";
    s += axes[i].name + "=" + format_number(point[i]);
  }
  return s;
}

}  // namespace

std::vector<double> parse_axis_values(const std::string& text) {
  if (text.empty()) throw DomainError("empty axis specification");
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3) throw DomainError("axis range must be start:stop[:step]");
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parts.size() == 3 ? parse_double(parts[2]) : 1.0;
    if (!(step > 0.0)) throw DomainError("axis step must be positive");
    if (stop < start) throw DomainError("axis range is empty");
    out = range(start, stop, step);
  } else {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(parse_double(part));
  }
  if (out.empty()) throw DomainError("axis has no values");
  return out;
}

Axis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw DomainError("axis must look like name=values, got '" + text + "'");
  Axis axis;
  axis.name = text.substr(0, eq);
  if (!known_param(axis.name)) throw DomainError("unknown sweep parameter '" + axis.name + "'");
  axis.values = parse_axis_values(text.substr(eq + 1));
  return axis;
}

void Table::add(std::vector<double> row, std::string label) {
  rows.push_back(std::move(row));
  if (!label_column.empty()) labels.push_back(std::move(label));
}

ModelParams resolve_params(const ParamMap& values) {
  for (const auto& [name, _] : values) {
    if (!known_param(name)) throw DomainError("unknown parameter '" + name + "'");
  }
  return ModelParams::make(get(values, "a").value_or(1.0), get(values, "r").value_or(1.0),
                           get(values, "f"), get(values, "l"), get(values, "c"),
                           get(values, "p").value_or(1.0));
}

Table run_sweep(const SweepSpec& spec) {
  if (spec.axes.size() > 2) throw DomainError("at most two swept axes are supported");
  for (const Axis& axis : spec.axes) {
    if (!known_param(axis.name)) throw DomainError("unknown sweep parameter '" + axis.name + "'");
    if (spec.fixed.count(axis.name)) {
      throw DomainError("parameter '" + axis.name + "' is both fixed and swept");
    }
  }
  if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name) {
    throw DomainError("the two swept axes must differ");
  }
  Table table;
  for (const Axis& axis : spec.axes) table.columns.push_back(axis.name);
  table.columns.push_back("cost_ratio");
  for_each_point(spec.axes, [&](const std::vector<double>& point) {
    ParamMap values = spec.fixed;
    for (std::size_t i = 0; i < point.size(); ++i) values[spec.axes[i].name] = point[i];
    try {
      std::vector<double> row = point;
      row.push_back(evaluate(spec.design, values));
      table.add(std::move(row));
    } catch (const DomainError& e) {
      table.skipped.push_back(describe_point(spec.axes, point) + ": " + e.what());
    }
  });
  return table;
}

ComparisonReport run_compare(const CompareSpec& spec) {
  if (spec.fixed.count(spec.axis.name)) {
    throw DomainError("parameter '" + spec.axis.name + "' is both fixed and swept");
  }
  ComparisonReport report;
  report.baseline = spec.baseline;
  report.alternative = spec.alternative;
  report.baseline_params = spec.fixed;
  report.alternative_params = spec.fixed;
  for (const auto& [k, v] : spec.alternative_overrides) report.alternative_params[k] = v;
  report.axis = spec.axis.name;
  for (double v : spec.axis.values) {
    ParamMap base = report.baseline_params;
    ParamMap alt = report.alternative_params;
    base[spec.axis.name] = v;
    if (!spec.alternative_overrides.count(spec.axis.name)) alt[spec.axis.name] = v;
    try {
      ComparisonPoint point;
      point.axis_value = v;
      point.baseline = evaluate(spec.baseline, base);
      point.alternative = evaluate(spec.alternative, alt);
      point.benefit = point.baseline / point.alternative;
      report.points.push_back(point);
    } catch (const DomainError& e) {
      report.skipped.push_back(spec.axis.name + "=" + format_number(v) + ": " + e.what());
    }
  }
  if (spec.baseline.uses_log() != spec.alternative.uses_log()) {
    const ParamMap& with_log = spec.alternative.uses_log() ? report.alternative_params : report.baseline_params;
    if (const auto p = get(with_log, "p")) report.log_limit = log_benefit_limit(*p);
  }
  return report;
}

Table ComparisonReport::to_table() const {
  Table table;
  table.columns = {axis, "baseline", "alternative", "benefit"};
  for (const ComparisonPoint& p : points) table.add({p.axis_value, p.baseline, p.alternative, p.benefit});
  table.skipped = skipped;
  return table;
}

std::vector<std::string> figure_preset_names() {
  return {"fig2a", "fig2b", "fig5a", "fig5b", "fig6a", "fig6b", "fig7a", "fig7b"};
}

Table figure_preset(const std::string& name) {
  const Design leveling{};
  const Design leveling_log{Compaction::leveling, Placement::value_log, Granularity::full_level};
  const Design tiering{Compaction::tiering, Placement::in_place, Granularity::full_level};
  const Design tiering_log{Compaction::tiering, Placement::value_log, Granularity::full_level};
  const std::vector<double> levels_1_10 = range(1, 10, 1);
  const std::vector<double> unit_steps = range(0.1, 1.0, 0.1);
  const std::vector<double> growth_axis = range(2, 32, 1);
  const std::vector<double> p_axis = {0.01, 0.05, 0.1, 0.5, 1.0};

  if (name == "fig2a") {
    return run_sweep({leveling, {{"r", 1.0}, {"c", 1000.0}}, {{"a", unit_steps}, {"l", levels_1_10}}});
  }
  if (name == "fig2b") {
    return run_sweep({leveling, {{"a", 1.0}, {"c", 1000.0}}, {{"r", unit_steps}, {"l", levels_1_10}}});
  }
  if (name == "fig5a" || name == "fig5b") {
    // Benefit of the alternative design over the baseline as a grid over two
    // axes: fig5a value log vs in place at f = 10, fig5b tiering vs leveling
    // (both with a value log, p = 1%) over l.
    const bool log_benefit = name == "fig5a";
    Table table;
    table.columns = log_benefit ? std::vector<std::string>{"p", "a", "baseline", "alternative", "benefit"}
                                : std::vector<std::string>{"a", "l", "baseline", "alternative", "benefit"};
    const std::vector<double> outer = log_benefit ? p_axis : unit_steps;
    const std::vector<double> inner = log_benefit ? range(0.0, 1.0, 0.05) : levels_1_10;
    for (double x : outer) {
      for (double y : inner) {
        ParamMap params{{"r", 1.0}, {"c", 1000.0}};
        if (log_benefit) {
          params.insert({{"f", 10.0}, {"p", x}, {"a", y}});
        } else {
          params.insert({{"p", 0.01}, {"a", x}, {"l", y}});
        }
        const Design base = log_benefit ? leveling : leveling_log;
        const Design alt = log_benefit ? leveling_log : tiering_log;
        const double b = evaluate(base, params);
        const double v = evaluate(alt, params);
        table.add({x, y, b, v, b / v});
      }
    }
    return table;
  }
  if (name == "fig6a") {
    Table table;
    table.label_column = "series";
    table.columns = {"f", "cost_ratio"};
    for (const auto& [label, design] : {std::pair{"tiering", tiering}, std::pair{"tiering-log", tiering_log}}) {
      for (double f : growth_axis) {
        table.add({f, evaluate(design, {{"r", 1.0}, {"c", 1000.0}, {"f", f}, {"p", 0.01}})}, label);
      }
    }
    return table;
  }
  if (name == "fig6b") {
    return run_sweep({tiering_log, {{"r", 1.0}, {"c", 1000.0}}, {{"p", p_axis}, {"f", growth_axis}}});
  }
  if (name == "fig7a" || name == "fig7b") {
    Table table;
    table.columns = {"c", "l", "cost_ratio"};
    for (double c : {1e2, 1e3, 1e4, 1e5, 1e6}) {
      for (double l : range(1, 20, 1)) {
        const double v = name == "fig7a"
                             ? lsm_objective(c, l)
                             : evaluate(leveling, {{"a", 1.0}, {"r", 1.0}, {"c", c}, {"l", l}});
        table.add({c, l, v});
      }
    }
    return table;
  }
  std::string known;
  for (const auto& n : figure_preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw DomainError("unknown preset '" + name + "' (known: " + known + ")");
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Table& table) {
  bool first = true;
  if (!table.label_column.empty()) {
    out << table.label_column;
    first = false;
  }
  for (const auto& c : table.columns) {
    out << (first ? "" : ",") << c;
    first = false;
  }
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    first = true;
    if (!table.label_column.empty()) {
      out << table.labels[r];
      first = false;
    }
    for (double v : table.rows[r]) {
      out << (first ? "" : ",") << (std::isnan(v) ? "" : format_number(v));
      first = false;
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    if (!table.label_column.empty()) row[table.label_column] = table.labels[r];
    for (std::size_t c = 0; c < table.columns.size(); ++c) row[table.columns[c]] = table.rows[r][c];
    rows.push_back(std::move(row));
  }
  out << rows.dump(2) << '\n';
}

}  // namespace vat
