#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "uwbresp/detect.hpp"
#include "uwbresp/error.hpp"
#include "uwbresp/io.hpp"
#include "uwbresp/preprocess.hpp"
#include "uwbresp/spectral.hpp"

namespace py = pybind11;
using namespace uwbresp;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Radargram to_radargram(const Array& data, double dt_fast, double dt_slow) {
  if (data.ndim() != 2) throw py::value_error("radargram must be a 2-D array (range bins x traces)");
  const auto bins = static_cast<std::size_t>(data.shape(0));
  const auto traces = static_cast<std::size_t>(data.shape(1));
  std::vector<double> samples(data.data(), data.data() + bins * traces);
  return Radargram(std::move(samples), bins, traces, dt_fast, dt_slow);
}

Array to_array(const Radargram& g) {
  Array out({g.bins(), g.traces()});
  std::memcpy(out.mutable_data(), g.samples().data(), g.samples().size() * sizeof(double));
  return out;
}

py::dict detection_dict(const Detection& d) {
  py::dict out;
  out["range_bin"] = d.range_bin;
  out["range_m"] = d.range_m;
  out["peak_factor"] = d.peak_factor;
  out["respiration_freq_hz"] = d.respiration_freq_hz;
  out["first_bin"] = d.first_bin;
  out["last_bin"] = d.last_bin;
  return out;
}

}  // namespace

PYBIND11_MODULE(_uwbresp, m) {
  m.doc() = "UWB impulse-radar respiration detection";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def(
      "default_config", [] { return dump_run_config(RunConfig{}); },
      "Default run config as JSON text.");

  m.def(
      "simulate",
      [](const std::string& config) {
        const auto cfg = parse_run_config(config);
        Radargram g = [&] {
          py::gil_scoped_release release;
          return simulate(cfg.scene, cfg.pulse, cfg.dims, cfg.pipeline.threads);
        }();
        return py::make_tuple(to_array(g), g.dt_fast(), g.dt_slow());
      },
      py::arg("config") = "{}", "Simulate a radargram; returns (samples[M, N], dt_fast, dt_slow).");

  m.def(
      "detect",
      [](const Array& data, double dt_fast, double dt_slow, const std::string& config) {
        const auto g = to_radargram(data, dt_fast, dt_slow);
        const auto cfg = parse_run_config(config);
        DetectionReport report;
        {
          py::gil_scoped_release release;
          report = detect(g, cfg.pipeline);
        }
        py::list detections;
        for (const auto& d : report.detections) detections.append(detection_dict(d));
        py::dict out;
        out["detections"] = detections;
        out["threshold"] = report.threshold_used;
        out["profile_mean"] = report.profile_stats.mean;
        out["profile_std"] = report.profile_stats.std;
        out["profile_median"] = report.profile_stats.median;
        return out;
      },
      py::arg("data"), py::arg("dt_fast"), py::arg("dt_slow"), py::arg("config") = "{}");

  m.def(
      "peak_factor_profile",
      [](const Array& data, double dt_fast, double dt_slow, const std::string& config) {
        const auto g = to_radargram(data, dt_fast, dt_slow);
        const auto cfg = parse_run_config(config);
        PeakFactorProfile prof;
        {
          py::gil_scoped_release release;
          prof = profile(run_pipeline(g, cfg.pipeline), cfg.pipeline);
        }
        Array p(prof.bins.size()), f(prof.bins.size());
        for (std::size_t i = 0; i < prof.bins.size(); ++i) {
          p.mutable_at(i) = prof.bins[i].pf.value;
          f.mutable_at(i) = prof.bins[i].peak_freq_hz;
        }
        return py::make_tuple(p, f);
      },
      py::arg("data"), py::arg("dt_fast"), py::arg("dt_slow"), py::arg("config") = "{}",
      "Per-bin peak factor and peak frequency after the full pipeline.");

  m.def(
      "peak_factor",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& values) {
        if (values.ndim() != 1) throw py::value_error("peak_factor expects a 1-D array");
        return peak_factor(std::span<const double>(values.data(), static_cast<std::size_t>(values.size()))).value;
      },
      py::arg("values"), "Max over RMS of a band-windowed spectrum.");

  m.def(
      "sweep",
      [](const std::vector<double>& xs, const std::vector<double>& ys, const std::string& config, bool fixed_seed) {
        const auto cfg = parse_run_config(config);
        std::vector<std::pair<double, double>> grid;
        for (double x : xs) {
          for (double y : ys) grid.emplace_back(x, y);
        }
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = distance_sweep(grid, cfg.scene, cfg.pulse, cfg.dims, cfg.pipeline,
                                  fixed_seed ? SeedPolicy::kFixed : SeedPolicy::kPerCell);
        }
        py::list rows;
        for (const auto& r : result.rows) {
          rows.append(py::make_tuple(r.body_wall_m, r.wall_radar_m, r.peak_factor, r.detected_freq_hz));
        }
        return py::make_tuple(rows, result.ordering_holds);
      },
      py::arg("xs"), py::arg("ys"), py::arg("config") = "{}", py::arg("fixed_seed") = false,
      "Returns ([(x, y, peak_factor, freq_hz), ...], ordering_holds).");

  m.def(
      "read_radargram",
      [](const std::string& path) {
        const auto g = read_radargram(path);
        return py::make_tuple(to_array(g), g.dt_fast(), g.dt_slow());
      },
      py::arg("path"));

  m.def(
      "write_radargram",
      [](const std::string& path, const Array& data, double dt_fast, double dt_slow) {
        write_radargram(path, to_radargram(data, dt_fast, dt_slow));
      },
      py::arg("path"), py::arg("data"), py::arg("dt_fast"), py::arg("dt_slow"));
}
