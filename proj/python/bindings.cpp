// Copyright 2026 The pimcbench Authors
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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "pimc/backend.hpp"
#include "pimc/error.hpp"
#include "pimc/harness.hpp"
#include "pimc/kernel.hpp"
#include "pimc/model.hpp"
#include "pimc/report.hpp"
#include "pimc/rng.hpp"

namespace py = pybind11;
using namespace pimc;

namespace {

std::vector<int> spins_of(const LayeredSystem& sys) { return {sys.spins().begin(), sys.spins().end()}; }

std::vector<std::int8_t> to_spins(const std::vector<int>& values) {
  std::vector<std::int8_t> out;
  out.reserve(values.size());
  for (int v : values) {
    if (v != 1 && v != -1) throw ValidationError("spins must be +1 or -1");
    out.push_back(static_cast<std::int8_t>(v));
  }
  return out;
}

py::dict stats_dict(const RunStats& st) {
  py::dict metrics;
  for (Metric m : kAllMetrics) {
    metrics[py::str(std::string(to_string(m)))] = py::make_tuple(st.at(m).mean, st.at(m).stdev);
  }
  py::dict d;
  d["qubits"] = st.qubits;
  d["layers"] = st.layers;
  d["points"] = st.points;
  d["sweeps"] = st.sweeps;
  d["backend"] = std::string(to_string(st.backend));
  d["reps"] = st.reps;
  d["bytes_in"] = st.bytes_in;
  d["bytes_out"] = st.bytes_out;
  d["flips"] = st.flips;
  d["spin_digest"] = st.spin_digest;
  d["metrics"] = metrics;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pimcbench, m) {
  m.doc() = "Layered-Ising Monte Carlo benchmark core.";

  static py::exception<Error> base_error(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base_error.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base_error.ptr());
  py::register_exception<DomainError>(m, "DomainError", base_error.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", base_error.ptr());
  py::register_exception<RngError>(m, "RngError", base_error.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base_error.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base_error.ptr());
  py::register_exception<MalformedBufferError>(m, "MalformedBufferError", base_error.ptr());
  py::register_exception<PhaseError>(m, "PhaseError", base_error.ptr());

  py::class_<Coupling>(m, "Coupling")
      .def(py::init<std::size_t, std::size_t, double>(), py::arg("i"), py::arg("j"), py::arg("value"))
      .def_readwrite("i", &Coupling::i)
      .def_readwrite("j", &Coupling::j)
      .def_readwrite("value", &Coupling::value)
      .def("__eq__", [](const Coupling& a, const Coupling& b) { return a == b; })
      .def("__repr__", [](const Coupling& c) {
        return "Coupling(" + std::to_string(c.i) + ", " + std::to_string(c.j) + ", " + format_number(c.value) + ")";
      });

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def(py::init<>())
      .def_readwrite("id", &ProblemInstance::id)
      .def_readwrite("qubit_count", &ProblemInstance::qubit_count)
      .def_readwrite("fields", &ProblemInstance::fields)
      .def_readwrite("couplings", &ProblemInstance::couplings)
      .def("validate", &ProblemInstance::validate)
      .def("__eq__", [](const ProblemInstance& a, const ProblemInstance& b) { return a == b; });

  m.def("load_instance", [](const std::string& text, std::string id) { return load_instance(text, std::move(id)); },
        py::arg("text"), py::arg("id") = "instance");
  m.def("emit_instance", &emit_instance);
  m.def("generate_instance", &generate_instance, py::arg("qubits"), py::arg("seed"), py::arg("density") = 0.5);

  py::class_<SimulationPoint>(m, "SimulationPoint")
      .def_readonly("index", &SimulationPoint::index)
      .def_readonly("s", &SimulationPoint::s)
      .def_readonly("gamma", &SimulationPoint::gamma)
      .def_readonly("beta", &SimulationPoint::beta);
  m.def("build_schedule", [](std::size_t n, double gamma0, double beta) { return build_schedule(n, gamma0, beta).points; },
        py::arg("points"), py::arg("gamma0") = 3.0, py::arg("beta") = 10.0);
  m.def("preset_points", &preset_points);
  m.def("variable_count", &variable_count, py::arg("qubits"), py::arg("layers"), py::arg("points"));
  m.def("perpendicular_coupling", &perpendicular_coupling, py::arg("beta"), py::arg("gamma"), py::arg("layers"));

  py::class_<RngState>(m, "RngState")
      .def(py::init<std::size_t, std::size_t>(), py::arg("chains"), py::arg("threads"))
      .def("init", &RngState::init, py::arg("seed"))
      .def("next_u32", &RngState::next_u32, py::arg("chain") = 0, py::arg("thread") = 0)
      .def("next_unit", &RngState::next_unit, py::arg("chain") = 0, py::arg("thread") = 0)
      .def_property_readonly("chains", &RngState::chains)
      .def_property_readonly("threads", &RngState::threads)
      .def_property_readonly("words", &RngState::words);

  py::class_<LayeredSystem>(m, "LayeredSystem")
      .def(py::init([](std::size_t layers, std::size_t sites, std::vector<Coupling> couplings,
                       std::vector<double> fields, double perp, const std::vector<int>& spins) {
             return LayeredSystem(layers, sites, std::move(couplings), std::move(fields), perp, to_spins(spins));
           }),
           py::arg("layers"), py::arg("sites"), py::arg("couplings"), py::arg("fields"), py::arg("perp_coupling"),
           py::arg("spins"))
      .def_property_readonly("layers", &LayeredSystem::layers)
      .def_property_readonly("sites", &LayeredSystem::sites)
      .def_property_readonly("perp_coupling", &LayeredSystem::perp_coupling)
      .def_property("spins", &spins_of,
                    [](LayeredSystem& s, const std::vector<int>& v) { s.set_spins(to_spins(v)); })
      .def("flip", &LayeredSystem::flip, py::arg("layer"), py::arg("site"))
      .def("__eq__", [](const LayeredSystem& a, const LayeredSystem& b) { return a == b; });

  m.def("trotterize", &trotterize, py::arg("instance"), py::arg("point"), py::arg("layers"), py::arg("rng"),
        py::arg("chain"), py::arg("thread") = 0);
  m.def("total_energy", &total_energy);
  m.def("flip_delta", &flip_delta, py::arg("system"), py::arg("layer"), py::arg("site"));
  m.def("accept", &accept, py::arg("delta"), py::arg("beta_unit"), py::arg("u"));

  py::class_<UpdateSchedule>(m, "UpdateSchedule")
      .def_readonly("qubit_colors", &UpdateSchedule::qubit_colors)
      .def_readonly("layer_classes", &UpdateSchedule::layer_classes)
      .def_property_readonly("phase_count", [](const UpdateSchedule& s) { return s.phases.size(); })
      .def_property_readonly("active_lanes", &UpdateSchedule::active_lanes);
  m.def("color_sites", &color_sites, py::arg("system"), py::arg("lanes"));
  m.def(
      "run_point",
      [](LayeredSystem& sys, std::uint64_t sweeps, std::size_t lanes, RngState& rng, std::size_t chain) {
        const auto r = run_point(sys, sweeps, color_sites(sys, lanes), rng, chain);
        return py::make_tuple(r.flips, r.energy);
      },
      py::arg("system"), py::arg("sweeps"), py::arg("lanes"), py::arg("rng"), py::arg("chain") = 0,
      "Sweeps `system` in place; returns (flips, energy).");

  m.def(
      "run_benchmark",
      [](std::size_t qubits, std::size_t layers, std::size_t points, std::uint64_t sweeps, const std::string& backend,
         std::size_t lanes, std::uint32_t seed, std::size_t reps) {
        RunConfig c;
        c.qubits = qubits;
        c.layers = layers;
        c.points = points;
        c.sweeps = sweeps;
        c.backend = parse_backend_kind(backend);
        c.lanes_per_group = lanes;
        c.seed = seed;
        std::vector<PhaseRecord> records;
        {
          py::gil_scoped_release release;
          for (std::size_t r = 0; r < reps; ++r) records.push_back(run_benchmark(c));
        }
        return stats_dict(aggregate(records));
      },
      py::arg("qubits"), py::arg("layers") = 128, py::arg("points"), py::arg("sweeps") = 20000,
      py::arg("backend") = "reference", py::arg("lanes") = 32, py::arg("seed") = 0, py::arg("reps") = 1);

  m.def("relative_difference", &relative_difference, py::arg("t_base"), py::arg("t_other"));
  m.def("ratio", &ratio, py::arg("t_num"), py::arg("t_den"));
  m.def("throughput", &throughput, py::arg("variables"), py::arg("sweeps"), py::arg("kernel_seconds"));

  m.def(
      "compare_reports",
      [](const std::string& base, const std::string& other) {
        const auto rows = compare_reports(parse_report(base), parse_report(other));
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["qubits"] = r.qubits;
          d["metric"] = r.metric;
          d["base_mean_s"] = r.base_mean_s;
          d["other_mean_s"] = r.other_mean_s;
          d["ratio"] = r.ratio;
          d["relative_difference"] = r.relative_difference;
          out.append(d);
        }
        return out;
      },
      py::arg("base_text"), py::arg("other_text"), "Compares two CSV reports given as text.");
}
