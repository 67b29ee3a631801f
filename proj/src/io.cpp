#include "uwbresp/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "uwbresp/error.hpp"

namespace uwbresp {
namespace {

using json = nlohmann::json;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
  return v;
}

double get_f64(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[at + i]) << (8 * i);
  return std::bit_cast<double>(v);
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::kConfigParse, msg); }

// Strict object reader: every key must be consumed by one of the handlers.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) config_error(path_ + ": expected an object");
  }

  void number(const char* key, double& dst) {
    visit(key, [&](const json& v, const std::string& field) {
      if (!v.is_number()) config_error(field + ": expected a number");
      dst = v.get<double>();
    });
  }
  void count(const char* key, std::size_t& dst) {
    visit(key, [&](const json& v, const std::string& field) {
      if (!v.is_number_unsigned()) config_error(field + ": expected a non-negative integer");
      dst = v.get<std::size_t>();
    });
  }
  void seed(const char* key, std::uint64_t& dst) {
    visit(key, [&](const json& v, const std::string& field) {
      if (!v.is_number_unsigned()) config_error(field + ": expected a non-negative integer");
      dst = v.get<std::uint64_t>();
    });
  }
  void flag(const char* key, bool& dst) {
    visit(key, [&](const json& v, const std::string& field) {
      if (!v.is_boolean()) config_error(field + ": expected true or false");
      dst = v.get<bool>();
    });
  }
  void band(const char* key, FrequencyBand& dst) {
    visit(key, [&](const json& v, const std::string& field) {
      Section s(v, field);
      s.number("low_hz", dst.low_hz);
      s.number("high_hz", dst.high_hz);
      s.finish();
    });
  }
  void visit(const char* key, const std::function<void(const json&, const std::string&)>& fn) {
    seen_.insert(key);
    if (auto it = j_.find(key); it != j_.end()) fn(*it, path_ + "." + key);
  }
  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) config_error(path_ + "." + key + ": unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_breather(const json& j, const std::string& path, Breather& b) {
  Section s(j, path);
  s.number("body_wall_m", b.body_wall_m);
  s.number("breath_freq_hz", b.breath_freq_hz);
  s.number("breath_amplitude_m", b.breath_amplitude_m);
  s.number("body_reflectivity", b.body_reflectivity);
  s.finish();
}

json band_json(const FrequencyBand& b) { return {{"low_hz", b.low_hz}, {"high_hz", b.high_hz}}; }

}  // namespace

std::vector<std::uint8_t> encode_radargram(const Radargram& g) {
  std::vector<std::uint8_t> out;
  out.reserve(kRadargramHeaderSize + g.samples().size() * 8);
  out.insert(out.end(), std::begin(kRadargramMagic), std::end(kRadargramMagic));
  put_u32(out, kRadargramVersion);
  put_u32(out, static_cast<std::uint32_t>(g.bins()));
  put_u32(out, static_cast<std::uint32_t>(g.traces()));
  put_f64(out, g.dt_fast());
  put_f64(out, g.dt_slow());
  for (double v : g.samples()) put_f64(out, v);
  return out;
}

Radargram decode_radargram(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kRadargramMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not a radargram file (bad magic)");
  }
  if (bytes.size() < kRadargramHeaderSize) {
    throw Error(ErrorCode::kTruncatedPayload, "radargram header truncated");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kRadargramVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, "unsupported radargram format version " + std::to_string(version));
  }
  const std::uint64_t bins = get_u32(bytes, 8);
  const std::uint64_t traces = get_u32(bytes, 12);
  const double dt_fast = get_f64(bytes, 16);
  const double dt_slow = get_f64(bytes, 24);
  const std::uint64_t expected = bins * traces * 8;
  const std::uint64_t actual = bytes.size() - kRadargramHeaderSize;
  if (actual < expected) {
    throw Error(ErrorCode::kTruncatedPayload, "payload holds " + std::to_string(actual) + " bytes, header claims " +
                                                  std::to_string(expected));
  }
  if (actual > expected) {
    throw Error(ErrorCode::kTruncatedPayload, "payload length " + std::to_string(actual) +
                                                  " does not match header (" + std::to_string(expected) + ")");
  }
  std::vector<double> samples(bins * traces);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = get_f64(bytes, kRadargramHeaderSize + 8 * i);
  return Radargram(std::move(samples), bins, traces, dt_fast, dt_slow);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kIo, "cannot open " + tmp.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!f) throw Error(ErrorCode::kIo, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot move output into place: " + path.string());
  }
}

void write_radargram(const std::filesystem::path& path, const Radargram& g) {
  const auto bytes = encode_radargram(g);
  write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

Radargram read_radargram(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_radargram(bytes);
}

RunConfig parse_run_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("syntax error: ") + e.what());
  }
  RunConfig cfg;
  Section top(root, "config");
  top.visit("scene", [&](const json& j, const std::string& path) {
    Section s(j, path);
    auto& sc = cfg.scene;
    s.number("body_wall_m", sc.body_wall_m);
    s.number("wall_radar_m", sc.wall_radar_m);
    s.number("wall_thickness_m", sc.wall_thickness_m);
    s.number("wall_rel_permittivity", sc.wall_rel_permittivity);
    s.number("wall_reflection_coeff", sc.wall_reflection_coeff);
    s.number("breath_freq_hz", sc.breath_freq_hz);
    s.number("breath_amplitude_m", sc.breath_amplitude_m);
    s.number("body_reflectivity", sc.body_reflectivity);
    s.number("noise_sigma", sc.noise_sigma);
    s.seed("rng_seed", sc.rng_seed);
    s.flag("wall_multiples", sc.wall_multiples);
    s.visit("extra_breathers", [&](const json& list, const std::string& lpath) {
      if (!list.is_array()) config_error(lpath + ": expected an array");
      sc.extra_breathers.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        Breather b;
        read_breather(list[i], lpath + "[" + std::to_string(i) + "]", b);
        sc.extra_breathers.push_back(b);
      }
    });
    s.finish();
  });
  top.visit("pulse", [&](const json& j, const std::string& path) {
    Section s(j, path);
    s.number("sigma", cfg.pulse.sigma);
    s.number("t0", cfg.pulse.t0);
    s.number("amplitude", cfg.pulse.amplitude);
    s.finish();
  });
  top.visit("pipeline", [&](const json& j, const std::string& path) {
    Section s(j, path);
    auto& p = cfg.pipeline;
    s.band("respiration_band", p.respiration_band);
    s.band("bandpass_band", p.bandpass_band);
    s.count("bandpass_taps", p.bandpass_taps);
    s.count("mean_filter_window", p.mean_filter_window);
    s.number("background_alpha", p.background_alpha);
    s.number("threshold_k", p.threshold_k);
    s.count("merge_radius_bins", p.merge_radius_bins);
    s.flag("power_spectrum", p.power_spectrum);
    s.count("spectrum_zero_pad", p.spectrum_zero_pad);
    std::size_t threads = p.threads;
    s.count("threads", threads);
    p.threads = static_cast<unsigned>(threads);
    s.finish();
  });
  top.visit("dims", [&](const json& j, const std::string& path) {
    Section s(j, path);
    s.count("M", cfg.dims.bins);
    s.count("N", cfg.dims.traces);
    s.number("dt_fast", cfg.dims.dt_fast);
    s.number("dt_slow", cfg.dims.dt_slow);
    s.finish();
  });
  top.finish();

  if (cfg.dims.bins < 2 || cfg.dims.traces < 2) config_error("dims.M and dims.N must be >= 2");
  if (cfg.dims.bins > 0xFFFFFFFFu || cfg.dims.traces > 0xFFFFFFFFu) config_error("dims.M and dims.N must fit in 32 bits");
  if (!(cfg.dims.dt_fast > 0.0)) config_error("dims.dt_fast must be positive");
  if (!(cfg.dims.dt_slow > 0.0)) config_error("dims.dt_slow must be positive");
  try {
    validate(cfg.scene, cfg.dims.dt_slow);
    validate(cfg.pulse);
    validate(cfg.pipeline, cfg.dims.traces, cfg.dims.dt_slow);
  } catch (const Error& e) {
    config_error(e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kConfigParse, "cannot open config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_run_config(ss.str());
}

std::string dump_run_config(const RunConfig& cfg) {
  const auto& sc = cfg.scene;
  json extra = json::array();
  for (const auto& b : sc.extra_breathers) {
    extra.push_back({{"body_wall_m", b.body_wall_m},
                     {"breath_freq_hz", b.breath_freq_hz},
                     {"breath_amplitude_m", b.breath_amplitude_m},
                     {"body_reflectivity", b.body_reflectivity}});
  }
  const auto& p = cfg.pipeline;
  json j = {
      {"scene",
       {{"body_wall_m", sc.body_wall_m},
        {"wall_radar_m", sc.wall_radar_m},
        {"wall_thickness_m", sc.wall_thickness_m},
        {"wall_rel_permittivity", sc.wall_rel_permittivity},
        {"wall_reflection_coeff", sc.wall_reflection_coeff},
        {"breath_freq_hz", sc.breath_freq_hz},
        {"breath_amplitude_m", sc.breath_amplitude_m},
        {"body_reflectivity", sc.body_reflectivity},
        {"noise_sigma", sc.noise_sigma},
        {"rng_seed", sc.rng_seed},
        {"wall_multiples", sc.wall_multiples},
        {"extra_breathers", extra}}},
      {"pulse", {{"sigma", cfg.pulse.sigma}, {"t0", cfg.pulse.t0}, {"amplitude", cfg.pulse.amplitude}}},
      {"pipeline",
       {{"respiration_band", band_json(p.respiration_band)},
        {"bandpass_band", band_json(p.bandpass_band)},
        {"bandpass_taps", p.bandpass_taps},
        {"mean_filter_window", p.mean_filter_window},
        {"background_alpha", p.background_alpha},
        {"threshold_k", p.threshold_k},
        {"merge_radius_bins", p.merge_radius_bins},
        {"power_spectrum", p.power_spectrum},
        {"spectrum_zero_pad", p.spectrum_zero_pad},
        {"threads", p.threads}}},
      {"dims",
       {{"M", cfg.dims.bins}, {"N", cfg.dims.traces}, {"dt_fast", cfg.dims.dt_fast}, {"dt_slow", cfg.dims.dt_slow}}},
  };
  return j.dump(2) + "\n";
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf.data(), end);
}

}  // namespace uwbresp
