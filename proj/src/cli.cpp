#include "uwbresp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "uwbresp/detect.hpp"
#include "uwbresp/error.hpp"
#include "uwbresp/io.hpp"
#include "uwbresp/preprocess.hpp"
#include "uwbresp/spectral.hpp"

namespace uwbresp::cli {
namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes: 0 success (detect: at least one detection; sweep: P increases in (x, y) order), "
    "1 no detection / ordering fails, 2 usage, config or input error, 3 simulation error.";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw UsageError("malformed " + what + ": '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(parse_number(item, what));
  if (!text.empty() && text.back() == ',') throw UsageError("malformed " + what + ": trailing comma");
  return values;
}

FrequencyBand parse_band(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--band expects LOW:HIGH, got '" + text + "'");
  return {parse_number(text.substr(0, colon), "--band low"), parse_number(text.substr(colon + 1), "--band high")};
}

// Options shared by the pipeline-running subcommands.
struct PipelineOverrides {
  std::string band;
  std::optional<double> threshold_k;
  bool power = false;

  void add_to(CLI::App& app) {
    app.add_option("--band", band, "Respiration band LOW:HIGH in Hz");
    app.add_option("--threshold-k", threshold_k, "Adaptive threshold multiplier k");
    app.add_flag("--power-spectrum", power, "Peak factor on |Y|^2 instead of |Y|");
  }
  void apply(PipelineConfig& p) const {
    if (!band.empty()) p.respiration_band = parse_band(band);
    if (threshold_k) p.threshold_k = *threshold_k;
    if (power) p.power_spectrum = true;
  }
};

RunConfig load_config(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return load_run_config(path);
}

std::string report_text(const DetectionReport& r) {
  std::ostringstream os;
  os << "# threshold: " << format_double(r.threshold_used) << "\n";
  os << "# profile: mean=" << format_double(r.profile_stats.mean) << " std=" << format_double(r.profile_stats.std)
     << " median=" << format_double(r.profile_stats.median) << "\n";
  os << "# detections: " << r.detections.size() << "\n";
  for (const auto& d : r.detections) {
    os << "range_m=" << format_double(d.range_m) << " freq_hz=" << format_double(d.respiration_freq_hz)
       << " peak_factor=" << format_double(d.peak_factor) << "\n";
  }
  return os.str();
}

std::string report_csv(const DetectionReport& r) {
  std::ostringstream os;
  os << "range_bin,range_m,freq_hz,peak_factor,first_bin,last_bin\n";
  for (const auto& d : r.detections) {
    os << d.range_bin << "," << format_double(d.range_m) << "," << format_double(d.respiration_freq_hz) << ","
       << format_double(d.peak_factor) << "," << d.first_bin << "," << d.last_bin << "\n";
  }
  return os.str();
}

int cmd_simulate(const std::string& config_path, const std::string& out_path, std::optional<std::uint64_t> seed,
                 std::ostream& out) {
  RunConfig cfg = load_config(config_path);
  if (seed) cfg.scene.rng_seed = *seed;
  const Radargram g = simulate(cfg.scene, cfg.pulse, cfg.dims, cfg.pipeline.threads);
  write_radargram(out_path, g);
  out << "simulate: wrote " << out_path << " (" << g.bins() << "x" << g.traces()
      << "), x=" << format_double(cfg.scene.body_wall_m) << " m, y=" << format_double(cfg.scene.wall_radar_m)
      << " m, seed=" << cfg.scene.rng_seed << "\n";
  return kExitOk;
}

int cmd_detect(const std::string& in_path, const std::string& config_path, const std::string& out_path,
               std::string csv_path, const PipelineOverrides& ov, std::ostream& out) {
  RunConfig cfg = load_config(config_path);
  ov.apply(cfg.pipeline);
  const Radargram g = read_radargram(in_path);
  const auto report = detect(g, cfg.pipeline);
  const auto text = report_text(report);
  if (!out_path.empty()) {
    write_file_atomic(out_path, text);
    if (csv_path.empty()) csv_path = out_path + ".csv";
  }
  if (!csv_path.empty()) write_file_atomic(csv_path, report_csv(report));
  out << text;
  return report.detections.empty() ? kExitNotDetected : kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& xs_text, const std::string& ys_text,
              const std::string& out_path, std::optional<std::uint64_t> seed, bool fixed_seed,
              const PipelineOverrides& ov, std::ostream& out) {
  RunConfig cfg = load_config(config_path);
  ov.apply(cfg.pipeline);
  if (seed) cfg.scene.rng_seed = *seed;
  const auto xs = parse_list(xs_text, "--x");
  const auto ys = parse_list(ys_text, "--y");
  std::vector<std::pair<double, double>> grid;
  for (double x : xs) {
    for (double y : ys) grid.emplace_back(x, y);
  }
  if (grid.empty()) throw Error(ErrorCode::kEmptyGrid, "sweep grid is empty");
  validate(cfg.pipeline, cfg.dims.traces, cfg.dims.dt_slow);
  const auto result = distance_sweep(grid, cfg.scene, cfg.pulse, cfg.dims, cfg.pipeline,
                                     fixed_seed ? SeedPolicy::kFixed : SeedPolicy::kPerCell);
  std::ostringstream csv;
  csv << "x_m,y_m,peak_factor,detected_freq_hz\n";
  for (const auto& r : result.rows) {
    csv << format_double(r.body_wall_m) << "," << format_double(r.wall_radar_m) << ","
        << format_double(r.peak_factor) << "," << format_double(r.detected_freq_hz) << "\n";
  }
  csv << "# ordering: " << (result.ordering_holds ? "PASS" : "FAIL") << "\n";
  if (!out_path.empty()) write_file_atomic(out_path, csv.str());
  out << csv.str();
  return result.ordering_holds ? kExitOk : kExitNotDetected;
}

int cmd_spectrum(const std::string& in_path, const std::string& config_path, const std::string& out_path,
                 std::optional<std::size_t> bin, const PipelineOverrides& ov, std::ostream& out) {
  RunConfig cfg = load_config(config_path);
  ov.apply(cfg.pipeline);
  const Radargram g = read_radargram(in_path);
  const auto pre = run_pipeline(g, cfg.pipeline);
  const auto prof = profile(pre, cfg.pipeline);
  std::size_t selected = 0;
  if (bin) {
    if (*bin >= g.bins()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "--bin " + std::to_string(*bin) + " outside [0, " + std::to_string(g.bins()) + ")");
    }
    selected = *bin;
  } else {
    for (std::size_t m = 1; m < prof.bins.size(); ++m) {
      if (prof.bins[m].pf.value > prof.bins[selected].pf.value) selected = m;
    }
  }
  const auto spec = slow_time_spectrum(
      pre, {.zero_pad = cfg.pipeline.spectrum_zero_pad, .power = cfg.pipeline.power_spectrum, .threads = cfg.pipeline.threads});
  const auto& b = prof.bins[selected];
  std::ostringstream csv;
  csv << "# range_bin: " << selected << "\n";
  csv << "# range_m: " << format_double(range_of_bin(g, selected)) << "\n";
  csv << "# peak_factor: " << format_double(b.pf.value) << "\n";
  csv << "# y_max: " << format_double(b.pf.y_max) << "\n";
  csv << "# y_rms: " << format_double(b.pf.y_rms) << "\n";
  csv << "# peak_freq_hz: " << format_double(b.peak_freq_hz) << "\n";
  csv << "# degenerate: " << (b.degenerate ? "true" : "false") << "\n";
  csv << "freq_hz,magnitude\n";
  const auto row = spec.row(selected);
  for (std::size_t j = 0; j < spec.freq_count(); ++j) {
    csv << format_double(spec.freq_axis[j]) << "," << format_double(row[j]) << "\n";
  }
  if (!out_path.empty()) {
    write_file_atomic(out_path, csv.str());
    out << "spectrum: bin " << selected << " P=" << format_double(b.pf.value) << " -> " << out_path << "\n";
  } else {
    out << csv.str();
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Through-wall respiration detection for UWB impulse-radar radargrams", "uwbresp"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  std::string config_path, out_path, in_path, csv_path, xs, ys;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> bin;
  bool fixed_seed = false;
  PipelineOverrides ov;

  auto* sim = app.add_subcommand("simulate", "Synthesize a through-wall radargram file");
  sim->add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
  sim->add_option("--out", out_path, "Output radargram file")->required();
  sim->add_option("--seed", seed, "Override scene.rng_seed");

  auto* det = app.add_subcommand("detect", "Detect respiration in a radargram file");
  det->add_option("input", in_path, "Radargram file")->required();
  det->add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
  det->add_option("--out", out_path, "Text report (CSV goes to <out>.csv unless --csv is given)");
  det->add_option("--csv", csv_path, "CSV report");
  ov.add_to(*det);

  auto* swp = app.add_subcommand("sweep", "Peak factor over a body-wall x wall-radar distance grid");
  swp->add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
  swp->add_option("--x", xs, "Comma-separated body-wall distances, m")->required();
  swp->add_option("--y", ys, "Comma-separated wall-radar distances, m")->required();
  swp->add_option("--out", out_path, "Output CSV");
  swp->add_option("--seed", seed, "Override scene.rng_seed");
  swp->add_flag("--fixed-seed", fixed_seed, "Use the same seed for every cell");
  ov.add_to(*swp);

  auto* spc = app.add_subcommand("spectrum", "Export one range bin's slow-time spectrum as CSV");
  spc->add_option("input", in_path, "Radargram file")->required();
  spc->add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
  spc->add_option("--out", out_path, "Output CSV (stdout when omitted)");
  spc->add_option("--bin", bin, "Range bin (default: bin with the largest peak factor)");
  ov.add_to(*spc);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_path, seed, out);
    if (det->parsed()) return cmd_detect(in_path, config_path, out_path, csv_path, ov, out);
    if (swp->parsed()) return cmd_sweep(config_path, xs, ys, out_path, seed, fixed_seed, ov, out);
    if (spc->parsed()) return cmd_spectrum(in_path, config_path, out_path, bin, ov, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const bool simulation = e.code() == ErrorCode::kEchoOutsideWindow || e.code() == ErrorCode::kPulseTruncated;
    return simulation ? kExitSimulation : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace uwbresp::cli
