#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "uwbresp/radargram.hpp"

namespace uwbresp {

/// First-order differentiated Gaussian (monocycle) transmit pulse.
struct PulseModel {
  double sigma = 65.8e-12;  // spectral peak 1/(2*pi*sigma) ~ 2.42 GHz
  double t0 = 0.5e-9;
  double amplitude = 1.0;
};

void validate(const PulseModel& pulse);

/// Unit-peak monocycle shape evaluated at time offset `tau` from its centre.
double monocycle(double tau, double sigma);

/// A breathing target behind the same wall as the primary body.
struct Breather {
  double body_wall_m = 0.4;
  double breath_freq_hz = 0.4;
  double breath_amplitude_m = 0.005;
  double body_reflectivity = 1.0;
};

struct SceneConfig {
  double body_wall_m = 0.4;   // x
  double wall_radar_m = 0.4;  // y
  double wall_thickness_m = 0.10;
  double wall_rel_permittivity = 4.4;
  double wall_reflection_coeff = 0.41;
  double breath_freq_hz = 0.4;
  double breath_amplitude_m = 0.005;
  double body_reflectivity = 1.0;
  double noise_sigma = 0.01;
  std::uint64_t rng_seed = 1;
  // Adds the wall back-face echo (one interior bounce).
  bool wall_multiples = false;
  std::vector<Breather> extra_breathers;

  Breather primary_breather() const {
    return {body_wall_m, breath_freq_hz, breath_amplitude_m, body_reflectivity};
  }
};

/// Throws Error(kInvalidConfig) naming the offending field. `dt_slow` bounds
/// the breathing frequencies by the slow-time Nyquist rate.
void validate(const SceneConfig& cfg, double dt_slow);

enum class EchoLabel { kWallFront, kWallBack, kBody, kMultipath };

std::string_view to_string(EchoLabel label);

struct EchoComponent {
  double delay = 0.0;  // two-way, seconds
  double amplitude = 0.0;
  EchoLabel label = EchoLabel::kBody;
  // Index into [primary, extra_breathers...] for body echoes.
  std::size_t body_index = 0;
};

/// Added two-way electrical path of one wall traversal: thickness*(sqrt(er)-1).
double wall_extra_path(const SceneConfig& cfg);

/// Nominal (rest position) one-way electrical range of breather `body_index`.
double nominal_body_range(const SceneConfig& cfg, std::size_t body_index = 0);

/// Samples s[k] = -A * ((k*dt - t0)/sigma^2) * exp(-(k*dt - t0)^2 / (2 sigma^2)),
/// scaled so that max |s| = A. Throws Error(kPulseTruncated) when t0 + 4 sigma
/// does not fit into length * dt_fast.
std::vector<double> generate_pulse(const PulseModel& pulse, double dt_fast, std::size_t length);

/// Echoes seen by trace `trace_index`: wall front face, one echo per breather,
/// and the wall back face when enabled.
std::vector<EchoComponent> echo_components(const SceneConfig& cfg, std::size_t trace_index,
                                           double dt_slow);

/// Noise-free trace: each component's monocycle re-evaluated analytically at
/// t - delay, scaled by amplitude * pulse.amplitude, and summed.
std::vector<double> render_trace(std::span<const EchoComponent> components, const PulseModel& pulse,
                                 std::size_t bins, double dt_fast);

struct RadarDims {
  std::size_t bins = 1024;
  std::size_t traces = 200;
  double dt_fast = 1.0 / 39e9;
  double dt_slow = 0.1;
};

/// Synthesizes a radargram. White Gaussian noise comes from a mt19937_64
/// stream per trace, seeded from (rng_seed, trace_index), so the output does
/// not depend on `threads`. Throws Error(kEchoOutsideWindow) naming the
/// component whose pulse support leaves the fast-time window.
Radargram simulate(const SceneConfig& cfg, const PulseModel& pulse, const RadarDims& dims,
                   unsigned threads = 0);

}  // namespace uwbresp
