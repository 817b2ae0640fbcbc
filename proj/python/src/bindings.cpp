// SPDX-License-Identifier: Apache-2.0
//
// dpfbmc: dual-polarization filter bank multicarrier simulation library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


// Python bindings. Grids cross the boundary as 2-D numpy arrays indexed
// [subcarrier, time]; waveforms as 1-D complex arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dpfbmc/channel.hpp"
#include "dpfbmc/dp_multiplex.hpp"
#include "dpfbmc/experiment.hpp"
#include "dpfbmc/interference.hpp"
#include "dpfbmc/metrics.hpp"
#include "dpfbmc/modem.hpp"
#include "dpfbmc/prototype_filter.hpp"

namespace py = pybind11;
using namespace dpfbmc;

namespace {

template <typename T>
Matrix<T> to_matrix(const py::array_t<T, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw ShapeError("expected a 2-D array");
  Matrix<T> m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

template <typename T>
py::array_t<T> to_array(const Matrix<T>& m) {
  py::array_t<T> a({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), a.mutable_data());
  return a;
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> a(v.size());
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

Waveform to_waveform(const py::array_t<cplx, py::array::c_style | py::array::forcecast>& x) {
  if (x.ndim() != 1) throw ShapeError("expected a 1-D array");
  Waveform w;
  w.samples.assign(x.data(), x.data() + x.size());
  w.sample_rate = 1.0;
  return w;
}

ExperimentConfig make_config(const std::string& verb, const std::optional<std::string>& json,
                             const std::vector<std::string>& overrides) {
  auto cfg = default_config(verb);
  if (json) cfg = parse_config(*json, cfg);
  for (const auto& o : overrides) apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

py::list rows_to_list(const ResultTable& t) {
  py::list out;
  for (const auto& r : t.rows) {
    py::dict d;
    d["sweep_value"] = r.sweep_value;
    d["system"] = r.system;
    d["metric"] = r.metric;
    d["value"] = r.value;
    d["ci_halfwidth"] = r.ci_halfwidth;
    d["bits"] = r.bits;
    d["frames"] = r.frames;
    d["seed"] = r.seed;
    out.append(d);
  }
  return out;
}

std::string table_csv(const ResultTable& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "dual-polarization FBMC simulation core";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<UnsupportedDesign>(m, "UnsupportedDesign", PyExc_ValueError);
  py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<PrototypeFilter>(m, "PrototypeFilter")
      .def_property_readonly("kind", [](const PrototypeFilter& f) { return to_string(f.kind); })
      .def_readonly("overlap", &PrototypeFilter::overlap)
      .def_readonly("num_subcarriers", &PrototypeFilter::num_subcarriers)
      .def_readonly("rolloff", &PrototypeFilter::rolloff)
      .def_property_readonly("coeffs", [](const PrototypeFilter& f) { return to_array(f.coeffs); })
      .def("__len__", &PrototypeFilter::length)
      .def("__repr__", &PrototypeFilter::describe);

  m.def(
      "design_filter",
      [](const std::string& kind, int overlap, int num_subcarriers, std::optional<double> rolloff) {
        return design_filter(parse_filter_kind(kind), overlap, num_subcarriers, rolloff);
      },
      py::arg("kind"), py::arg("overlap"), py::arg("num_subcarriers"), py::arg("rolloff") = py::none());

  m.def(
      "localization_table",
      [](const PrototypeFilter& f, int delta_n, int delta_m) {
        return to_array(localization_table(f, delta_n, delta_m).entries);
      },
      py::arg("filter"), py::arg("delta_n") = 2, py::arg("delta_m") = 3,
      "Q entries indexed [dn + delta_n, dm + delta_m].");

  m.def(
      "fbmc_modulate",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a, const PrototypeFilter& f,
         bool fast) {
        const auto grid = to_matrix(a);
        const auto w = fast ? fbmc_modulate_fast(grid, f) : fbmc_modulate_direct(grid, f);
        return to_array(w.samples);
      },
      py::arg("a"), py::arg("filter"), py::arg("fast") = true);

  m.def(
      "fbmc_demodulate",
      [](const py::array_t<cplx, py::array::c_style | py::array::forcecast>& x, const PrototypeFilter& f) {
        return to_array(fbmc_demodulate(to_waveform(x), f));
      },
      py::arg("samples"), py::arg("filter"));

  m.def(
      "dp_loopback",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a, const PrototypeFilter& f,
         const std::string& structure) {
        const auto s = parse_dp_structure(structure);
        return to_array(dp_demodulate(dp_modulate(dp_split(to_matrix(a), s), f), f, s).merged);
      },
      py::arg("a"), py::arg("filter"), py::arg("structure") = "I",
      "Ideal-channel DP-FBMC modulation and demodulation; returns the merged inner products.");

  m.def("rms_delay_spread", [](const std::string& name) { return rms_delay_spread(builtin_profile(name)); },
        py::arg("profile"));
  m.def("channel_profiles", &builtin_profile_names);

  m.def("theoretical_ber_qpsk", &theoretical_ber_qpsk, py::arg("eb_n0_db"));
  m.def("qpsk_ebn0_for_ber", &qpsk_ebn0_for_ber, py::arg("ber"));
  m.def("theoretical_sinr_angular", &theoretical_sinr_angular, py::arg("snr_db"), py::arg("theta_deg"));

  m.def(
      "default_config", [](const std::string& verb) { return config_to_json(default_config(verb)); },
      py::arg("verb") = "ber", "Default configuration of an experiment as canonical JSON.");

  m.def(
      "config_fingerprint",
      [](const std::string& verb, std::optional<std::string> json, const std::vector<std::string>& overrides) {
        return config_fingerprint(make_config(verb, json, overrides));
      },
      py::arg("verb") = "ber", py::arg("config") = py::none(), py::arg("overrides") = std::vector<std::string>{});

  m.def(
      "run_sweep",
      [](const std::string& verb, std::optional<std::string> json, const std::vector<std::string>& overrides,
         unsigned workers) {
        const auto cfg = make_config(verb, json, overrides);
        RunOptions opt;
        opt.workers = workers;
        ResultTable t;
        {
          py::gil_scoped_release release;
          t = verb == "offsets" ? run_offset_sweep(cfg, opt) : run_ber_sweep(cfg, opt);
        }
        return py::make_tuple(rows_to_list(t), table_csv(t));
      },
      py::arg("verb") = "ber", py::arg("config") = py::none(), py::arg("overrides") = std::vector<std::string>{},
      py::arg("workers") = 0u, "Run a BER or offset sweep; returns (rows, csv).");

  m.def(
      "run_psd",
      [](std::optional<std::string> json, const std::vector<std::string>& overrides) {
        const auto cfg = make_config("psd", json, overrides);
        PsdReport rep;
        {
          py::gil_scoped_release release;
          rep = run_psd(cfg);
        }
        py::dict traces;
        for (const auto& [name, p] : rep.traces)
          traces[py::str(name)] = py::make_tuple(to_array(p.frequency), to_array(p.density_db));
        return py::make_tuple(traces, rows_to_list(rep.oob));
      },
      py::arg("config") = py::none(), py::arg("overrides") = std::vector<std::string>{},
      "Returns ({system: (frequency, density_db)}, oob rows).");

  m.def("table_report", &run_table_report, py::arg("num_subcarriers") = 512);
}
