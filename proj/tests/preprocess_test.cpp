#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "oracles.hpp"
#include "uwbresp/error.hpp"
#include "uwbresp/preprocess.hpp"
#include "uwbresp/simulator.hpp"

namespace uwbresp {
namespace {

std::vector<double> row0(const Radargram& g) { return {g.row(0).begin(), g.row(0).end()}; }

// Two-bin radargram whose second bin is a scaled copy, so every stage also
// runs on more than one row.
Radargram from_series(const std::vector<double>& s, double dt_slow = 0.1) {
  std::vector<double> twice(s);
  for (double& v : twice) v *= 2.0;
  return oracle::series_radargram({s, twice}, dt_slow);
}

std::vector<double> tone(std::size_t n, double f, double dt, double amp = 1.0) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = amp * std::cos(2.0 * std::numbers::pi * f * static_cast<double>(i) * dt + 0.3);
  return s;
}

Radargram random_radargram(std::size_t bins, std::size_t traces, std::uint64_t seed) {
  return Radargram(oracle::random_series(bins * traces, seed), bins, traces, 1.0 / 39e9, 0.1);
}

TEST(RemoveDc, Examples) {
  EXPECT_EQ(row0(remove_dc(from_series({7, 7, 7, 7}))), (std::vector<double>{0, 0, 0, 0}));
  EXPECT_EQ(row0(remove_dc(from_series({1, -1, 1, -1}))), (std::vector<double>{1, -1, 1, -1}));
  EXPECT_EQ(row0(remove_dc(from_series({1, 2, 3, 4}))), (std::vector<double>{-1.5, -0.5, 0.5, 1.5}));
}

TEST(RemoveDc, ZeroMeanAndIdempotent) {
  auto g = random_radargram(16, 200, 3);
  std::vector<double> shifted(g.samples().begin(), g.samples().end());
  for (double& v : shifted) v += 1e3;
  g = g.with_samples(shifted);
  const auto once = remove_dc(g);
  for (std::size_t m = 0; m < once.bins(); ++m) {
    double sum = 0.0;
    for (double v : once.row(m)) sum += v;
    EXPECT_LT(std::abs(sum / 200.0), 1e-12 * 1e3);
  }
  const auto twice = remove_dc(once);
  for (std::size_t i = 0; i < once.samples().size(); ++i) EXPECT_NEAR(twice.samples()[i], once.samples()[i], 1e-12);
}

TEST(Detrend, KillsExactLines) {
  std::vector<double> line(10);
  for (std::size_t n = 0; n < 10; ++n) line[n] = 2.0 + 0.1 * static_cast<double>(n);
  for (const auto out = detrend_linear(from_series(line)); double v : out.samples()) EXPECT_LT(std::abs(v), 1e-12);
  for (const auto out = detrend_linear(from_series(std::vector<double>(10, -3.25))); double v : out.samples()) EXPECT_LT(std::abs(v), 1e-12);
}

TEST(Detrend, MatchesNormalEquationsOracle) {
  auto s = oracle::random_series(200, 11);
  double mean = 0.0;
  for (double v : s) mean += v;
  for (double& v : s) v -= mean / 200.0;
  const auto out = row0(detrend_linear(from_series(s)));
  const auto line = oracle::normal_equations_line(s);
  double resid_sum = 0.0, resid_corr = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double expected = s[n] - (line.intercept + line.slope * static_cast<double>(n));
    EXPECT_NEAR(out[n], expected, 1e-12);
    resid_sum += out[n];
    resid_corr += out[n] * static_cast<double>(n);
  }
  EXPECT_LT(std::abs(resid_sum), 1e-9);
  EXPECT_LT(std::abs(resid_corr), 1e-9);
}

TEST(SuppressBackground, Examples) {
  for (double alpha : {0.0, 0.05, 0.5, 0.9}) {
    for (const auto out = suppress_background(from_series({4, 4, 4, 4, 4}), alpha); double v : out.samples()) EXPECT_EQ(v, 0.0);
  }
  const std::vector<double> s{3, 1, 4, 1, 5, 9, 2, 6};
  const auto frozen = row0(suppress_background(from_series(s), 0.0));
  for (std::size_t n = 0; n < s.size(); ++n) EXPECT_EQ(frozen[n], s[n] - s[0]);
  // b[-1] = s[0]; out[n] = s[n] - b[n-1]; b[n] = 0.5 b[n-1] + 0.5 s[n].
  EXPECT_EQ(row0(suppress_background(from_series({0, 0, 0, 1, 1, 1}), 0.5)),
            (std::vector<double>{0, 0, 0, 1, 0.5, 0.25}));
  EXPECT_THROW(suppress_background(from_series(s), 1.0), Error);
}

TEST(Bandpass, PassbandTonePreserved) {
  const std::size_t n = 1000;
  const auto g = from_series(tone(n, 0.5, 0.1));
  const auto out = row0(bandpass_slow_time(g, {0.2, 1.0}, 101));
  const auto in = row0(g);
  const double before = oracle::tone_amplitude(in, 0.5, 0.1, 101, n - 101);
  const double after = oracle::tone_amplitude(out, 0.5, 0.1, 101, n - 101);
  EXPECT_NEAR(after / before, 1.0, 0.05);
}

TEST(Bandpass, StopbandToneAttenuated) {
  const std::size_t n = 1000;
  const auto g = from_series(tone(n, 3.0, 0.1));
  const auto out = row0(bandpass_slow_time(g, {0.2, 1.0}, 101));
  const double before = oracle::tone_amplitude(row0(g), 3.0, 0.1, 101, n - 101);
  const double after = oracle::tone_amplitude(out, 3.0, 0.1, 101, n - 101);
  EXPECT_LE(20.0 * std::log10(after / before), -30.0);
}

TEST(Bandpass, ZeroPhase) {
  const std::size_t n = 1000;
  const auto in = tone(n, 0.5, 0.1);
  const auto out = row0(bandpass_slow_time(from_series(in), {0.2, 1.0}, 101));
  // Projection of the output onto the input tone vs its quadrature.
  double in_phase = 0.0, quad = 0.0;
  for (std::size_t i = 101; i < n - 101; ++i) {
    const double ph = 2.0 * std::numbers::pi * 0.5 * static_cast<double>(i) * 0.1 + 0.3;
    in_phase += out[i] * std::cos(ph);
    quad += out[i] * std::sin(ph);
  }
  EXPECT_LT(std::abs(quad / in_phase), 1e-3);
}

TEST(Bandpass, ZerosAndShortSeries) {
  for (const auto out = bandpass_slow_time(oracle::zeros(4, 200), {0.2, 1.0}, 101); double v : out.samples()) EXPECT_EQ(v, 0.0);
  // Fewer traces than taps: reflection wraps repeatedly.
  const auto short_out = bandpass_slow_time(from_series({1, 2, 3, 4, 5}), {0.2, 1.0}, 101);
  for (double v : short_out.samples()) EXPECT_TRUE(std::isfinite(v));
}

TEST(Bandpass, RejectsBandAboveNyquist) {
  try {
    bandpass_slow_time(oracle::zeros(4, 200), {0.2, 6.0}, 101);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidBand);
  }
}

TEST(ReflectIndex, SymmetricExtension) {
  using detail::reflect_index;
  EXPECT_EQ(reflect_index(-1, 5), 1u);
  EXPECT_EQ(reflect_index(-4, 5), 4u);
  EXPECT_EQ(reflect_index(-5, 5), 3u);
  EXPECT_EQ(reflect_index(5, 5), 3u);
  EXPECT_EQ(reflect_index(9, 5), 1u);
  EXPECT_EQ(reflect_index(-3, 1), 0u);
}

TEST(MeanFilter, Examples) {
  EXPECT_EQ(row0(mean_filter(from_series(std::vector<double>(9, 2.5)), 5)), std::vector<double>(9, 2.5));
  std::vector<double> impulse(11, 0.0);
  impulse[5] = 1.0;
  const auto spread = row0(mean_filter(from_series(impulse), 5));
  for (std::size_t i = 0; i < 11; ++i) EXPECT_DOUBLE_EQ(spread[i], (i >= 3 && i <= 7) ? 0.2 : 0.0);
  std::vector<double> ramp(20);
  for (std::size_t i = 0; i < 20; ++i) ramp[i] = 0.5 * static_cast<double>(i) - 3.0;
  const auto smooth = row0(mean_filter(from_series(ramp), 5));
  for (std::size_t i = 2; i < 18; ++i) EXPECT_NEAR(smooth[i], ramp[i], 1e-12);
}

TEST(MeanFilter, MatchesHandRolledConvolutionExactly) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = oracle::random_series(200, seed);
    for (std::size_t w : {1u, 3u, 5u, 9u}) {
      EXPECT_EQ(row0(mean_filter(from_series(s), w)), oracle::moving_average(s, w));
    }
  }
}

TEST(MeanFilter, RejectsEvenWindow) {
  try {
    mean_filter(from_series({1, 2, 3, 4}), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEvenWindow);
  }
}

TEST(Normalize, Examples) {
  const auto g = oracle::series_radargram({{1, -4, 2}, {0.5, 3, -1}});
  const auto r = normalize(g);
  EXPECT_FALSE(r.degenerate);
  double peak = 0.0;
  for (std::size_t i = 0; i < g.samples().size(); ++i) {
    peak = std::max(peak, std::abs(r.data.samples()[i]));
    EXPECT_DOUBLE_EQ(r.data.samples()[i], g.samples()[i] / 4.0);
    EXPECT_EQ(std::signbit(r.data.samples()[i]), std::signbit(g.samples()[i]));
  }
  EXPECT_EQ(peak, 1.0);
  const auto z = normalize(oracle::zeros(3, 3));
  EXPECT_TRUE(z.degenerate);
  for (double v : z.data.samples()) EXPECT_EQ(v, 0.0);
}

TEST(Normalize, IdempotentAndScaleFree) {
  const auto g = random_radargram(8, 50, 5);
  const auto once = normalize(g).data;
  const auto twice = normalize(once).data;
  std::vector<double> scaled(g.samples().begin(), g.samples().end());
  for (double& v : scaled) v *= 37.5;
  const auto from_scaled = normalize(g.with_samples(scaled)).data;
  for (std::size_t i = 0; i < once.samples().size(); ++i) {
    EXPECT_NEAR(twice.samples()[i], once.samples()[i], 1e-12);
    EXPECT_NEAR(from_scaled.samples()[i], once.samples()[i], 1e-12);
  }
}

TEST(Stages, PositivelyHomogeneousAndShapePreserving) {
  const auto g = random_radargram(6, 120, 9);
  std::vector<double> scaled(g.samples().begin(), g.samples().end());
  const double c = 3.7;
  for (double& v : scaled) v *= c;
  const auto gc = g.with_samples(scaled);
  const std::vector<std::pair<const char*, std::function<Radargram(const Radargram&)>>> stages = {
      {"remove_dc", [](const Radargram& x) { return remove_dc(x); }},
      {"detrend", [](const Radargram& x) { return detrend_linear(x); }},
      {"background", [](const Radargram& x) { return suppress_background(x, 0.05); }},
      {"bandpass", [](const Radargram& x) { return bandpass_slow_time(x, {0.2, 1.0}, 101); }},
      {"mean", [](const Radargram& x) { return mean_filter(x, 5); }},
  };
  for (const auto& [name, stage] : stages) {
    const auto a = stage(gc);
    const auto b = stage(g);
    ASSERT_EQ(a.bins(), g.bins());
    ASSERT_EQ(a.traces(), g.traces());
    EXPECT_EQ(a.dt_fast(), g.dt_fast());
    EXPECT_EQ(a.dt_slow(), g.dt_slow());
    for (std::size_t i = 0; i < a.samples().size(); ++i) {
      ASSERT_NEAR(a.samples()[i], c * b.samples()[i], 1e-12 * c) << name;
    }
  }
}

TEST(RunPipeline, ZeroInput) {
  const auto out = run_pipeline(oracle::zeros(16, 200), PipelineConfig{});
  for (double v : out.data.samples()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(out.stage_log, (std::vector<std::string>{kStageRemoveDc, kStageDetrend, kStageBackground, kStageBandpass,
                                                     kStageMeanFilter, kStageNormalize, kStageNormalizeDegenerate}));
  EXPECT_TRUE(out.normalize_degenerate());
}

TEST(RunPipeline, EqualsManualComposition) {
  const auto g = random_radargram(32, 200, 21);
  PipelineConfig cfg;
  cfg.threads = 1;
  const auto out = run_pipeline(g, cfg);
  auto x = remove_dc(g);
  x = detrend_linear(x);
  x = suppress_background(x, cfg.background_alpha);
  x = bandpass_slow_time(x, cfg.bandpass_band, cfg.bandpass_taps);
  x = mean_filter(x, cfg.mean_filter_window);
  EXPECT_EQ(out.data, normalize(x).data);
  EXPECT_FALSE(out.normalize_degenerate());
  EXPECT_EQ(out.stage_log.size(), 6u);
}

TEST(RunPipeline, ParallelMatchesSerialBitForBit) {
  const auto g = simulate(SceneConfig{}, PulseModel{}, RadarDims{});
  PipelineConfig serial;
  serial.threads = 1;
  PipelineConfig parallel;
  parallel.threads = 8;
  EXPECT_EQ(run_pipeline(g, serial).data, run_pipeline(g, parallel).data);
}

TEST(RunPipeline, SlowTimeMeanRemovedAtBodyBin) {
  const SceneConfig scene;
  const auto g = simulate(scene, PulseModel{}, RadarDims{});
  const auto body = static_cast<std::size_t>(std::lround(oracle::nominal_body_bin(scene, g.dt_fast())));
  const auto x = detrend_linear(remove_dc(g));
  double sum = 0.0, scale = 0.0;
  for (double v : x.row(body)) {
    sum += v;
    scale = std::max(scale, std::abs(v));
  }
  EXPECT_LT(std::abs(sum / 200.0), 1e-9 * scale);
}

TEST(RunPipeline, SmoothingKeepsRespirationBin) {
  SceneConfig scene;
  scene.noise_sigma = 0.0;
  const auto g = simulate(scene, PulseModel{}, RadarDims{});
  auto x = bandpass_slow_time(suppress_background(detrend_linear(remove_dc(g)), 0.05), {0.2, 1.0}, 101);
  auto argmax_variance = [](const Radargram& r) {
    std::size_t best = 0;
    double best_var = -1.0;
    for (std::size_t m = 0; m < r.bins(); ++m) {
      double v = 0.0;
      for (double s : r.row(m)) v += s * s;
      if (v > best_var) {
        best_var = v;
        best = m;
      }
    }
    return best;
  };
  EXPECT_EQ(argmax_variance(x), argmax_variance(mean_filter(x, 5)));
}

TEST(RunPipeline, PropagatesConfigErrors) {
  PipelineConfig cfg;
  cfg.mean_filter_window = 6;
  try {
    run_pipeline(oracle::zeros(4, 200), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEvenWindow);
  }
}

}  // namespace
}  // namespace uwbresp
