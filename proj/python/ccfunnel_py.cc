// Copyright 2026 The ccfunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <utility>

#include "ccfunnel/controller.h"
#include "ccfunnel/fault.h"
#include "ccfunnel/planner.h"
#include "ccfunnel/scenario.h"
#include "ccfunnel/signal.h"
#include "ccfunnel/trace_check.h"
#include "ccfunnel/trace_io.h"

namespace py = pybind11;

namespace ccfunnel {
namespace {

using Field = Eigen::VectorXd TraceRow::*;

const std::pair<const char*, Field> kFields[] = {
    {"x", &TraceRow::x},
    {"v", &TraceRow::v},
    {"v_d", &TraceRow::v_d},
    {"e_v", &TraceRow::e_v},
    {"u", &TraceRow::u},
    {"x_hat", &TraceRow::x_hat},
    {"ev_hat", &TraceRow::ev_hat},
    {"phi_lower", &TraceRow::phi_lower},
    {"phi_upper", &TraceRow::phi_upper},
    {"rho_lower", &TraceRow::rho_lower},
    {"rho_upper", &TraceRow::rho_upper},
    {"soft_lower", &TraceRow::soft_lower},
    {"soft_upper", &TraceRow::soft_upper},
    {"hard_lower", &TraceRow::hard_lower},
    {"hard_upper", &TraceRow::hard_upper},
    {"gamma_v", &TraceRow::gamma_v},
};

py::array_t<double> field_array(const SimTrace& trace, const std::string& name) {
  const auto rows = static_cast<py::ssize_t>(trace.rows.size());
  if (name == "t") {
    py::array_t<double> out(rows);
    auto a = out.mutable_unchecked<1>();
    for (py::ssize_t k = 0; k < rows; ++k) a(k) = trace.rows[k].t;
    return out;
  }
  for (const auto& [key, field] : kFields) {
    if (name != key) continue;
    py::array_t<double> out({rows, static_cast<py::ssize_t>(trace.outputs)});
    auto a = out.mutable_unchecked<2>();
    for (py::ssize_t k = 0; k < rows; ++k) {
      for (int i = 0; i < trace.outputs; ++i) a(k, i) = (trace.rows[k].*field)[i];
    }
    return out;
  }
  throw py::key_error("unknown trace field: " + name);
}

py::dict fault_dict(const Fault& f) {
  py::dict d;
  d["kind"] = std::string(fault_kind_name(f.kind));
  d["time"] = f.time;
  d["index"] = f.index;
  d["message"] = f.message;
  return d;
}

template <class Fn>
py::array_t<double> vectorize(const py::array_t<double>& t, Fn&& fn) {
  py::array_t<double> out(t.request().shape);
  const double* in = t.data();
  double* o = out.mutable_data();
  for (py::ssize_t k = 0; k < t.size(); ++k) o[k] = fn(in[k]);
  return out;
}

}  // namespace
}  // namespace ccfunnel

PYBIND11_MODULE(_core, m) {
  using namespace ccfunnel;
  m.doc() = "Constrained funnel control: planner, controller and simulator.";

  py::register_exception<FaultError>(m, "FaultError", PyExc_RuntimeError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<TraceFormatError>(m, "TraceFormatError",
                                           PyExc_ValueError);

  py::class_<TimeSignal>(m, "TimeSignal")
      .def_static("constant", &TimeSignal::constant, py::arg("value"))
      .def_static("sinusoid", &TimeSignal::sinusoid, py::arg("amplitude"),
                  py::arg("omega"), py::arg("phase") = 0.0,
                  py::arg("offset") = 0.0)
      .def_static("exp_envelope", &TimeSignal::exp_envelope, py::arg("rho0"),
                  py::arg("rho_inf"), py::arg("rate"))
      .def_static("sum", &TimeSignal::sum, py::arg("terms"))
      .def_static("scaled", &TimeSignal::scaled, py::arg("coefficient"),
                  py::arg("signal"))
      .def("value", &TimeSignal::value, py::arg("t"))
      .def("derivative", &TimeSignal::derivative, py::arg("t"))
      .def("values",
           [](const TimeSignal& s, const py::array_t<double>& t) {
             return vectorize(t, [&](double x) { return s.value(x); });
           })
      .def("derivatives",
           [](const TimeSignal& s, const py::array_t<double>& t) {
             return vectorize(t, [&](double x) { return s.derivative(x); });
           })
      .def("__add__", [](const TimeSignal& a, const TimeSignal& b) { return a + b; })
      .def("__sub__", [](const TimeSignal& a, const TimeSignal& b) { return a - b; })
      .def("__rmul__", [](const TimeSignal& s, double c) { return c * s; })
      .def("__eq__", [](const TimeSignal& a, const TimeSignal& b) { return a == b; });

  py::class_<ConstraintPair>(m, "ConstraintPair")
      .def(py::init<>())
      .def_readwrite("hard_lower", &ConstraintPair::hard_lower)
      .def_readwrite("hard_upper", &ConstraintPair::hard_upper)
      .def_readwrite("soft_lower", &ConstraintPair::soft_lower)
      .def_readwrite("soft_upper", &ConstraintPair::soft_upper)
      .def_readwrite("eps_hard", &ConstraintPair::eps_hard)
      .def_readwrite("eps_soft", &ConstraintPair::eps_soft);

  py::enum_<PlannerVariant>(m, "PlannerVariant")
      .value("NONSMOOTH", PlannerVariant::kNonsmooth)
      .value("SMOOTH", PlannerVariant::kSmooth);

  py::class_<PlannerConfig>(m, "PlannerConfig")
      .def(py::init<>())
      .def_readwrite("mu", &PlannerConfig::mu)
      .def_readwrite("k_c", &PlannerConfig::k_c)
      .def_readwrite("variant", &PlannerConfig::variant)
      .def_readwrite("kappa", &PlannerConfig::kappa)
      .def_readwrite("nu", &PlannerConfig::nu);

  m.def("eta", [](const ConstraintPair& c, double t) {
    const Gaps g = eta(c, t);
    return py::make_tuple(g.lower, g.upper);
  });
  m.def("modification_rate", &modification_rate, py::arg("phi"),
        py::arg("gap"), py::arg("config"), py::arg("index") = -1);
  m.def("funnel_bounds",
        [](double phi_lower, double phi_upper, const ConstraintPair& c,
           const PlannerConfig& cfg, double t) {
          const Bounds b = funnel_bounds(phi_lower, phi_upper, c, cfg, t);
          return py::make_tuple(b.lower, b.upper);
        },
        py::arg("phi_lower"), py::arg("phi_upper"), py::arg("constraint"),
        py::arg("config"), py::arg("t"));
  m.def("smooth_max", &smooth_max);
  m.def("smooth_min", &smooth_min);

  m.def("normalize_output", &normalize_output, py::arg("x"),
        py::arg("rho_lower"), py::arg("rho_upper"));
  m.def("transform", &transform, py::arg("z"));
  m.def("inverse_transform", &inverse_transform, py::arg("w"));
  m.def("velocity_reference",
        [](const Eigen::VectorXd& x, const Eigen::VectorXd& lower,
           const Eigen::VectorXd& upper, double k_x) {
          return velocity_reference(x, {lower, upper}, k_x);
        },
        py::arg("x"), py::arg("rho_lower"), py::arg("rho_upper"),
        py::arg("k_x"));
  m.def("control_input", &control_input, py::arg("e_v"), py::arg("gamma_v"),
        py::arg("k_v"));

  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("name", &Scenario::name)
      .def_readonly("outputs", &Scenario::outputs)
      .def_readwrite("constraints", &Scenario::constraints)
      .def_readwrite("planner", &Scenario::planner)
      .def_readwrite("k_x", &Scenario::k_x)
      .def_readwrite("k_v", &Scenario::k_v)
      .def_property(
          "t_end", [](const Scenario& s) { return s.sim.t_end; },
          [](Scenario& s, double v) { s.sim.t_end = v; })
      .def_property(
          "h", [](const Scenario& s) { return s.sim.h; },
          [](Scenario& s, double v) { s.sim.h = v; })
      .def_property(
          "record_stride", [](const Scenario& s) { return s.sim.record_stride; },
          [](Scenario& s, int v) { s.sim.record_stride = v; })
      .def("serialize", &serialize_scenario)
      .def("validate", [](const Scenario& s) {
        py::list out;
        for (const ValidationIssue& issue : validate_scenario(s)) {
          py::dict d;
          d["check"] = issue.check;
          d["message"] = issue.message;
          d["time"] = issue.time;
          d["output"] = issue.output;
          d["line"] = issue.line;
          d["text"] = describe(issue);
          out.append(d);
        }
        return out;
      });

  m.def("reference_scenario", &reference_scenario, py::arg("k_c") = 3.0);
  m.def("parse_scenario",
        [](const std::string& text, const std::vector<std::string>& overrides) {
          return parse_scenario(text, overrides);
        },
        py::arg("text"), py::arg("overrides") = std::vector<std::string>{});
  m.def("load_scenario", &load_scenario, py::arg("path"),
        py::arg("overrides") = std::vector<std::string>{});

  py::class_<SimTrace>(m, "Trace")
      .def_readonly("outputs", &SimTrace::outputs)
      .def_property_readonly("ok", &SimTrace::ok)
      .def("__len__", [](const SimTrace& tr) { return tr.rows.size(); })
      .def_property_readonly("faults",
                             [](const SimTrace& tr) {
                               py::list out;
                               for (const Fault& f : tr.faults) out.append(fault_dict(f));
                               return out;
                             })
      .def("__getitem__", &field_array, py::arg("field"))
      .def("to_csv", [](const SimTrace& tr) {
        std::ostringstream os;
        write_trace_csv(os, tr);
        return os.str();
      });

  m.def("read_trace_csv",
        [](const std::string& text, int outputs) {
          std::istringstream is(text);
          return read_trace_csv(is, outputs);
        },
        py::arg("text"), py::arg("outputs"));

  m.def("simulate",
        [](const Scenario& s) {
          py::gil_scoped_release release;
          return simulate(s);
        },
        py::arg("scenario"));
  m.def("oracle_simulate",
        [](const Scenario& s) {
          py::gil_scoped_release release;
          return oracle_simulate(s);
        },
        py::arg("scenario"));

  m.def("check_trace",
        [](const SimTrace& trace, const Scenario& s) {
          const CheckReport report = check_trace(trace, s);
          py::dict checks;
          for (const CheckResult& c : report.checks) {
            py::dict d;
            d["passed"] = c.passed;
            d["margin"] = c.margin;
            d["time"] = c.time;
            d["output"] = c.output;
            d["detail"] = c.detail;
            checks[py::str(c.name)] = d;
          }
          py::list fits;
          for (const RecoveryFit& f : report.recovery_fits) {
            fits.append(py::make_tuple(f.output, f.upper, f.t_begin, f.t_end,
                                       f.rate));
          }
          py::dict out;
          out["passed"] = report.passed();
          out["checks"] = checks;
          out["recovery_fits"] = fits;
          out["text"] = report.to_text();
          return out;
        },
        py::arg("trace"), py::arg("scenario"));
}
