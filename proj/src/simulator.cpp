#include "uwbresp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "uwbresp/error.hpp"
#include "uwbresp/parallel.hpp"

namespace uwbresp {
namespace {

constexpr double kMinDistance = 1e-3;
constexpr double kSupportSigmas = 4.0;

void require(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw Error(ErrorCode::kInvalidConfig, field + " " + rule);
}

void validate_breather(const Breather& b, const std::string& prefix, double dt_slow) {
  require(b.body_wall_m > 0.0 && std::isfinite(b.body_wall_m), prefix + "body_wall_m", "must be positive");
  require(b.breath_amplitude_m >= 0.0 && std::isfinite(b.breath_amplitude_m),
          prefix + "breath_amplitude_m", "must be non-negative");
  require(b.body_wall_m > b.breath_amplitude_m, prefix + "body_wall_m",
          "must exceed breath_amplitude_m");
  require(b.breath_freq_hz > 0.0 && b.breath_freq_hz < 0.5 / dt_slow, prefix + "breath_freq_hz",
          "must lie in (0, slow-time Nyquist)");
  require(b.body_reflectivity >= 0.0 && std::isfinite(b.body_reflectivity),
          prefix + "body_reflectivity", "must be non-negative");
}

double body_delay(const SceneConfig& cfg, const Breather& b, double displacement) {
  return 2.0 * (cfg.wall_radar_m + wall_extra_path(cfg) + b.body_wall_m + displacement) / kSpeedOfLight;
}

double body_amplitude(const SceneConfig& cfg, const Breather& b) {
  const double transmission = 1.0 - cfg.wall_reflection_coeff * cfg.wall_reflection_coeff;
  const double d = std::max(cfg.wall_radar_m + b.body_wall_m, kMinDistance);
  return b.body_reflectivity * transmission * transmission / (d * d);
}

std::vector<Breather> breathers(const SceneConfig& cfg) {
  std::vector<Breather> all{cfg.primary_breather()};
  all.insert(all.end(), cfg.extra_breathers.begin(), cfg.extra_breathers.end());
  return all;
}

}  // namespace

void validate(const PulseModel& pulse) {
  require(pulse.sigma > 0.0 && std::isfinite(pulse.sigma), "pulse.sigma", "must be positive");
  require(pulse.t0 >= kSupportSigmas * pulse.sigma && std::isfinite(pulse.t0), "pulse.t0",
          "must be at least 4 * sigma");
  require(std::isfinite(pulse.amplitude), "pulse.amplitude", "must be finite");
}

void validate(const SceneConfig& cfg, double dt_slow) {
  require(dt_slow > 0.0, "dims.dt_slow", "must be positive");
  validate_breather(cfg.primary_breather(), "scene.", dt_slow);
  require(cfg.wall_radar_m > 0.0 && std::isfinite(cfg.wall_radar_m), "scene.wall_radar_m", "must be positive");
  require(cfg.wall_thickness_m > 0.0 && std::isfinite(cfg.wall_thickness_m), "scene.wall_thickness_m",
          "must be positive");
  require(cfg.wall_rel_permittivity >= 1.0 && std::isfinite(cfg.wall_rel_permittivity),
          "scene.wall_rel_permittivity", "must be >= 1");
  require(cfg.wall_reflection_coeff > 0.0 && cfg.wall_reflection_coeff < 1.0,
          "scene.wall_reflection_coeff", "must lie in (0, 1)");
  require(cfg.noise_sigma >= 0.0 && std::isfinite(cfg.noise_sigma), "scene.noise_sigma",
          "must be non-negative");
  for (std::size_t i = 0; i < cfg.extra_breathers.size(); ++i) {
    validate_breather(cfg.extra_breathers[i], "scene.extra_breathers[" + std::to_string(i) + "].", dt_slow);
  }
}

std::string_view to_string(EchoLabel label) {
  switch (label) {
    case EchoLabel::kWallFront: return "wall_front";
    case EchoLabel::kWallBack: return "wall_back";
    case EchoLabel::kBody: return "body";
    case EchoLabel::kMultipath: return "multipath";
  }
  return "unknown";
}

double monocycle(double tau, double sigma) {
  const double u = tau / sigma;
  // Unit peak at u = -1.
  return -u * std::exp(0.5 - 0.5 * u * u);
}

double wall_extra_path(const SceneConfig& cfg) {
  return cfg.wall_thickness_m * (std::sqrt(cfg.wall_rel_permittivity) - 1.0);
}

double nominal_body_range(const SceneConfig& cfg, std::size_t body_index) {
  const auto all = breathers(cfg);
  if (body_index >= all.size()) throw Error(ErrorCode::kIndexOutOfRange, "no breather " + std::to_string(body_index));
  return cfg.wall_radar_m + wall_extra_path(cfg) + all[body_index].body_wall_m;
}

std::vector<double> generate_pulse(const PulseModel& pulse, double dt_fast, std::size_t length) {
  if (length < 1) throw Error(ErrorCode::kInvalidConfig, "pulse length must be >= 1");
  if (!(dt_fast > 0.0)) throw Error(ErrorCode::kNonPositiveInterval, "dt_fast must be positive");
  if (!(pulse.sigma > 0.0)) throw Error(ErrorCode::kInvalidConfig, "pulse.sigma must be positive");
  if (pulse.t0 + kSupportSigmas * pulse.sigma > static_cast<double>(length) * dt_fast) {
    throw Error(ErrorCode::kPulseTruncated, "pulse centre + 4 sigma exceeds the sample window");
  }
  const double s2 = pulse.sigma * pulse.sigma;
  std::vector<double> s(length);
  double peak = 0.0;
  for (std::size_t k = 0; k < length; ++k) {
    const double tau = static_cast<double>(k) * dt_fast - pulse.t0;
    s[k] = -(tau / s2) * std::exp(-tau * tau / (2.0 * s2));
    peak = std::max(peak, std::abs(s[k]));
  }
  if (peak > 0.0) {
    for (double& v : s) v *= pulse.amplitude / peak;
  }
  return s;
}

std::vector<EchoComponent> echo_components(const SceneConfig& cfg, std::size_t trace_index, double dt_slow) {
  validate(cfg, dt_slow);
  std::vector<EchoComponent> out;
  const double y = cfg.wall_radar_m;
  const double gamma = cfg.wall_reflection_coeff;
  out.push_back({2.0 * y / kSpeedOfLight, gamma / std::pow(std::max(y, kMinDistance), 2), EchoLabel::kWallFront, 0});
  if (cfg.wall_multiples) {
    // Back face: dielectric-to-air reflection flips sign, one transmission each way.
    const double inner = cfg.wall_thickness_m * std::sqrt(cfg.wall_rel_permittivity);
    const double d = std::max(y + cfg.wall_thickness_m, kMinDistance);
    out.push_back({2.0 * (y + inner) / kSpeedOfLight, -gamma * (1.0 - gamma * gamma) / (d * d),
                   EchoLabel::kWallBack, 0});
  }
  const auto all = breathers(cfg);
  const double t = static_cast<double>(trace_index) * dt_slow;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Breather& b = all[i];
    const double displacement = b.breath_amplitude_m * std::sin(2.0 * std::numbers::pi * b.breath_freq_hz * t);
    out.push_back({body_delay(cfg, b, displacement), body_amplitude(cfg, b), EchoLabel::kBody, i});
  }
  return out;
}

std::vector<double> render_trace(std::span<const EchoComponent> components, const PulseModel& pulse,
                                 std::size_t bins, double dt_fast) {
  std::vector<double> trace(bins, 0.0);
  for (std::size_t k = 0; k < bins; ++k) {
    const double t = static_cast<double>(k) * dt_fast;
    double acc = 0.0;
    for (const auto& c : components) {
      acc += c.amplitude * pulse.amplitude * monocycle(t - c.delay, pulse.sigma);
    }
    trace[k] = acc;
  }
  return trace;
}

Radargram simulate(const SceneConfig& cfg, const PulseModel& pulse, const RadarDims& dims, unsigned threads) {
  if (dims.bins < 2 || dims.traces < 2) {
    throw Error(ErrorCode::kDimensionTooSmall, "simulation needs at least 2x2 samples");
  }
  if (!(dims.dt_fast > 0.0) || !(dims.dt_slow > 0.0)) {
    throw Error(ErrorCode::kNonPositiveInterval, "sampling intervals must be positive");
  }
  validate(cfg, dims.dt_slow);
  validate(pulse);

  // Extremes of every component's delay over the breathing cycle.
  const double window = static_cast<double>(dims.bins) * dims.dt_fast;
  const double margin = kSupportSigmas * pulse.sigma;
  auto check = [&](const EchoComponent& c, double swing, const std::string& name) {
    if (c.delay - swing - margin < 0.0 || c.delay + swing + margin > window) {
      throw Error(ErrorCode::kEchoOutsideWindow,
                  "echo '" + name + "' at " + std::to_string((c.delay) * 1e9) +
                      " ns does not fit the fast-time window of " + std::to_string(window * 1e9) + " ns");
    }
  };
  const auto rest = echo_components(cfg, 0, dims.dt_slow);
  const auto all = breathers(cfg);
  for (const auto& c : rest) {
    double swing = 0.0;
    std::string name{to_string(c.label)};
    if (c.label == EchoLabel::kBody) {
      swing = 2.0 * all[c.body_index].breath_amplitude_m / kSpeedOfLight;
      if (c.body_index > 0) name += "[" + std::to_string(c.body_index) + "]";
    }
    check(c, swing, name);
  }

  const std::size_t m_bins = dims.bins;
  const std::size_t n_traces = dims.traces;
  std::vector<double> samples(m_bins * n_traces);
  parallel_for(n_traces, threads, [&](std::size_t n) {
    const auto comps = echo_components(cfg, n, dims.dt_slow);
    auto trace = render_trace(comps, pulse, m_bins, dims.dt_fast);
    if (cfg.noise_sigma > 0.0) {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.rng_seed), static_cast<std::uint32_t>(cfg.rng_seed >> 32),
                        static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(std::uint64_t{n} >> 32)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
      for (double& v : trace) v += noise(rng);
    }
    for (std::size_t m = 0; m < m_bins; ++m) samples[m * n_traces + n] = trace[m];
  });
  return Radargram(std::move(samples), m_bins, n_traces, dims.dt_fast, dims.dt_slow);
}

}  // namespace uwbresp
