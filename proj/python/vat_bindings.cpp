#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vat/calibration.hpp"
#include "vat/cli.hpp"
#include "vat/errors.hpp"
#include "vat/model.hpp"
#include "vat/optimizer.hpp"
#include "vat/simulator.hpp"
#include "vat/sweep.hpp"

namespace py = pybind11;

namespace {

py::dict table_to_dict(const vat::Table& t) {
  py::dict d;
  d["columns"] = t.columns;
  d["label_column"] = t.label_column;
  d["labels"] = t.labels;
  d["rows"] = t.rows;
  d["skipped"] = t.skipped;
  return d;
}

py::dict report_to_dict(const vat::SimReport& r) {
  py::dict d;
  d["bytes_read"] = r.bytes_read;
  d["bytes_written"] = r.bytes_written;
  d["dataset_bytes"] = r.dataset_bytes;
  d["amplification"] = r.amplification;
  d["write_amplification"] = r.write_amplification;
  d["measured_a"] = r.measured_a;
  d["measured_a_clamped"] = r.measured_a_clamped;
  d["a_samples"] = r.a_samples;
  d["steps"] = r.steps;
  d["effective_levels"] = r.effective_levels;
  d["notes"] = r.notes;
  return d;
}

vat::SimConfig make_config(const std::string& design, int f, int l, std::uint64_t s0, std::uint64_t sst,
                           std::optional<double> a, double p, const std::string& pick) {
  vat::SimConfig c;
  c.design = vat::parse_design(design);
  c.growth = f;
  c.levels = l;
  c.s0_bytes = s0;
  c.sst_bytes = sst ? sst : s0;
  c.a_override = a;
  c.key_ratio = p;
  c.pick = vat::parse_pick_policy(pick);
  return c;
}

}  // namespace

PYBIND11_MODULE(_vat, m) {
  m.doc() = "I/O amplification models, optimizer, simulators and calibration for multi-level KV stores";

  py::register_exception<vat::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<vat::IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "cost_ratio",
      [](const std::string& design, double a, double r, std::optional<double> f, std::optional<double> l,
         std::optional<double> c, double p, double sst_over_sl) {
        const auto params = vat::ModelParams::make(a, r, f, l, c, p);
        return vat::cost_ratio(vat::parse_design(design), params, sst_over_sl);
      },
      py::arg("design") = "leveling", py::kw_only(), py::arg("a") = 1.0, py::arg("r") = 1.0,
      py::arg("f") = py::none(), py::arg("l") = py::none(), py::arg("c") = py::none(), py::arg("p") = 1.0,
      py::arg("sst_over_sl") = 0.0);

  m.def("space_amplification", &vat::space_amplification, py::arg("f"), py::arg("l"));
  m.def("log_benefit_limit", &vat::log_benefit_limit, py::arg("p"));

  m.def(
      "lambert_w0",
      [](double x) {
        const auto e = vat::lambert_w0(x);
        return py::make_tuple(e.w0, e.residual);
      },
      py::arg("x"), "Principal branch W_0(x); returns (w, |w e^w - x|).");

  m.def(
      "minimize",
      [](const std::string& design, double a, double r, double p, double c, int l_min, int l_max) {
        vat::MinimizeRequest req;
        req.design = vat::parse_design(design);
        req.a = a;
        req.r = r;
        req.p = p;
        req.c = c;
        req.l_min = l_min;
        req.l_max = l_max;
        const auto res = vat::minimize_cost_ratio(req);
        py::list curve;
        for (const auto& pt : res.curve) curve.append(py::make_tuple(pt.levels, pt.growth, pt.objective));
        py::dict d;
        d["levels"] = res.levels;
        d["growth"] = res.growth;
        d["objective"] = res.objective;
        d["curve"] = curve;
        return d;
      },
      py::arg("design") = "leveling", py::kw_only(), py::arg("a") = 1.0, py::arg("r") = 1.0, py::arg("p") = 1.0,
      py::arg("c") = 1000.0, py::arg("l_min") = 1, py::arg("l_max") = 30);

  m.def("growth_schedule_from_anchor", &vat::growth_schedule_from_anchor, py::arg("levels"),
        py::arg("last_factor"));
  m.def(
      "growth_schedule_constant_total",
      [](int levels, double total, double s0) {
        const auto s = vat::growth_schedule_constant_total(levels, total, s0);
        return py::make_tuple(s.factors, s.lagrange_multiplier);
      },
      py::arg("levels"), py::arg("total_bytes"), py::arg("s0_bytes"));

  m.def(
      "simulate_counters",
      [](const std::string& design, int f, int l, std::uint64_t s0, std::uint64_t sst, std::optional<double> a,
         double p, std::uint64_t dataset) {
        auto config = make_config(design, f, l, s0, sst, a, p, "round-robin");
        if (!dataset) {
          dataset = s0;
          for (int i = 0; i < l; ++i) dataset *= static_cast<std::uint64_t>(f);
        }
        return report_to_dict(vat::simulate_counters(config, dataset));
      },
      py::arg("design") = "leveling", py::kw_only(), py::arg("f") = 10, py::arg("l") = 3,
      py::arg("s0") = std::uint64_t{1} << 20, py::arg("sst") = 0, py::arg("a") = py::none(), py::arg("p") = 0.01,
      py::arg("dataset") = 0);

  m.def(
      "simulate_ssts",
      [](const std::string& design, int f, int l, std::uint64_t s0, std::uint64_t sst, std::uint64_t pairs,
         const std::string& dist, std::uint64_t seed, std::uint32_t key_bytes, std::uint32_t value_bytes,
         const std::string& pick) {
        auto config = make_config(design, f, l, s0, sst, std::nullopt, 0.01, pick);
        vat::WorkloadSpec w;
        w.num_pairs = pairs;
        w.distribution = vat::parse_distribution(dist);
        w.seed = seed;
        w.key_bytes = key_bytes;
        w.value_bytes = value_bytes;
        return report_to_dict(vat::simulate_ssts(w, config));
      },
      py::arg("design") = "leveling", py::kw_only(), py::arg("f") = 8, py::arg("l") = 3, py::arg("s0"),
      py::arg("sst") = 0, py::arg("pairs"), py::arg("dist") = "uniform", py::arg("seed") = 1,
      py::arg("key_bytes") = 3, py::arg("value_bytes") = 1079, py::arg("pick") = "round-robin");

  m.def(
      "estimate_a",
      [](const std::string& path, bool lenient, bool weighted) {
        const auto read = vat::read_trace_file(path, lenient);
        vat::EstimateOptions opt;
        opt.weighting = weighted ? vat::Weighting::bytes : vat::Weighting::unweighted;
        const auto s = vat::estimate_a(read.records, opt);
        py::dict d;
        d["mean_raw"] = s.mean_raw;
        d["mean_clamped"] = s.mean_clamped;
        d["samples"] = s.samples;
        d["empty_lower"] = s.empty_lower;
        d["problems"] = read.problems;
        return d;
      },
      py::arg("trace_path"), py::kw_only(), py::arg("lenient") = false, py::arg("weighted") = false);

  m.def(
      "estimate_r",
      [](const std::string& path, std::uint64_t request_bytes, std::uint32_t queue_depth) {
        return vat::estimate_r(vat::read_profile_file(path), request_bytes, queue_depth);
      },
      py::arg("profile_path"), py::arg("request_bytes"), py::arg("queue_depth") = vat::kDefaultQueueDepth);

  m.def(
      "sweep",
      [](const std::string& design, const vat::ParamMap& fixed, const std::map<std::string, std::string>& axes) {
        vat::SweepSpec spec;
        spec.design = vat::parse_design(design);
        spec.fixed = fixed;
        for (const auto& [name, values] : axes) spec.axes.push_back({name, vat::parse_axis_values(values)});
        return table_to_dict(vat::run_sweep(spec));
      },
      py::arg("design"), py::arg("fixed"), py::arg("axes"));

  m.def("figure_preset", [](const std::string& name) { return table_to_dict(vat::figure_preset(name)); },
        py::arg("name"));
  m.def("figure_preset_names", &vat::figure_preset_names);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = vat::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line; returns (exit_code, stdout, stderr).");
}
