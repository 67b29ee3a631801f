#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace uwbresp::oracle {

std::vector<std::complex<double>> direct_dft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      // Reduce k*t mod n first to keep the phase argument small.
      const double phase = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[t] * std::polar(1.0, phase);
    }
    out[k] = acc;
  }
  return out;
}

Line normal_equations_line(std::span<const double> y) {
  double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double n = static_cast<double>(i);
    s0 += 1;
    s1 += n;
    s2 += n * n;
    t0 += y[i];
    t1 += n * y[i];
  }
  const double det = s0 * s2 - s1 * s1;
  return {(s2 * t0 - s1 * t1) / det, (s0 * t1 - s1 * t0) / det};
}

double tone_amplitude(std::span<const double> x, double freq_hz, double dt, std::size_t first, std::size_t last) {
  double c = 0, s = 0, cc = 0, ss = 0;
  for (std::size_t i = first; i < last; ++i) {
    const double ph = 2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) * dt;
    c += x[i] * std::cos(ph);
    s += x[i] * std::sin(ph);
    cc += std::cos(ph) * std::cos(ph);
    ss += std::sin(ph) * std::sin(ph);
  }
  const double a = c / cc;
  const double b = s / ss;
  return std::hypot(a, b);
}

std::vector<double> moving_average(std::span<const double> x, std::size_t window) {
  const std::size_t half = window / 2;
  const std::size_t n = x.size();
  // numpy-style 'reflect' padding; requires half < n.
  std::vector<double> padded;
  for (std::size_t i = half; i >= 1; --i) padded.push_back(x[i]);
  padded.insert(padded.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= half; ++i) padded.push_back(x[n - 1 - i]);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < window; ++j) sum += padded[i + j];
    out[i] = sum / static_cast<double>(window);
  }
  return out;
}

double brute_peak_factor(std::span<const double> v) {
  double mx = -1.0;
  for (double y : v) mx = std::max(mx, y);
  double sq = 0.0;
  for (double y : v) sq += y * y;
  return mx / std::sqrt(sq / static_cast<double>(v.size()));
}

double nominal_body_bin(const SceneConfig& cfg, double dt_fast, std::size_t body_index) {
  const auto comps = echo_components(cfg, 0, 0.1);
  for (const auto& c : comps) {
    if (c.label == EchoLabel::kBody && c.body_index == body_index) return c.delay / dt_fast;
  }
  return -1.0;
}

std::vector<double> random_series(std::size_t n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

Radargram zeros(std::size_t bins, std::size_t traces, double dt_fast, double dt_slow) {
  return Radargram(std::vector<double>(bins * traces, 0.0), bins, traces, dt_fast, dt_slow);
}

Radargram series_radargram(const std::vector<std::vector<double>>& rows, double dt_slow) {
  return Radargram::from_rows(rows, 1.0 / 39e9, dt_slow);
}

}  // namespace uwbresp::oracle
