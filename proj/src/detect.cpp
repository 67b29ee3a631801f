#include "uwbresp/detect.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "uwbresp/error.hpp"
#include "uwbresp/parallel.hpp"
#include "uwbresp/preprocess.hpp"

namespace uwbresp {
namespace {

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

double robust_threshold(const std::vector<double>& values, double k) {
  const double med = median_of(values);
  std::vector<double> dev(values.size());
  std::transform(values.begin(), values.end(), dev.begin(), [med](double p) { return std::abs(p - med); });
  return med + k * kMadToSigma * median_of(std::move(dev));
}

std::vector<double> usable_values(const PeakFactorProfile& profile) {
  std::vector<double> values;
  values.reserve(profile.bins.size());
  for (const auto& b : profile.bins) {
    if (!b.degenerate) values.push_back(b.pf.value);
  }
  return values;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

double adaptive_threshold(const PeakFactorProfile& profile, double k) {
  if (profile.bins.size() < 4) {
    throw Error(ErrorCode::kDimensionTooSmall, "adaptive threshold needs at least 4 range bins");
  }
  if (!(k > 0.0)) throw Error(ErrorCode::kInvalidConfig, "threshold k must be positive");
  const auto values = usable_values(profile);
  if (values.empty()) throw Error(ErrorCode::kNoUsableSpectrum, "no usable spectrum: every range bin is degenerate");
  return robust_threshold(values, k);
}

DetectionReport detect_in_profile(const PeakFactorProfile& profile, double dt_fast, double k, std::size_t merge_radius) {
  DetectionReport report;
  std::vector<double> all;
  all.reserve(profile.bins.size());
  for (const auto& b : profile.bins) all.push_back(b.pf.value);
  if (all.empty()) return report;

  double sum = 0.0;
  for (double p : all) sum += p;
  const double mean = sum / static_cast<double>(all.size());
  double var = 0.0;
  for (double p : all) var += (p - mean) * (p - mean);
  report.profile_stats = {mean, std::sqrt(var / static_cast<double>(all.size())), median_of(all)};

  const bool any_usable = std::any_of(profile.bins.begin(), profile.bins.end(), [](const auto& b) { return !b.degenerate; });
  // A fully degenerate profile is flat at P = 1.
  report.threshold_used = any_usable ? adaptive_threshold(profile, k) : robust_threshold(all, k);

  std::vector<std::size_t> hits;
  for (std::size_t m = 0; m < profile.bins.size(); ++m) {
    const auto& b = profile.bins[m];
    if (!b.degenerate && b.pf.value > report.threshold_used) hits.push_back(m);
  }

  std::size_t i = 0;
  while (i < hits.size()) {
    std::size_t j = i;
    while (j + 1 < hits.size() && hits[j + 1] - hits[j] <= merge_radius) ++j;
    Detection d;
    d.first_bin = hits[i];
    d.last_bin = hits[j];
    d.range_bin = hits[i];
    for (std::size_t h = i; h <= j; ++h) {
      const auto& b = profile.bins[hits[h]];
      d.peak_factor = std::max(d.peak_factor, b.pf.value);
      if (b.pf.y_max > profile.bins[d.range_bin].pf.y_max) d.range_bin = hits[h];
    }
    d.range_m = range_of_bin(dt_fast, d.range_bin);
    d.respiration_freq_hz = profile.bins[d.range_bin].peak_freq_hz;
    report.detections.push_back(d);
    i = j + 1;
  }
  std::stable_sort(report.detections.begin(), report.detections.end(),
                   [](const Detection& a, const Detection& b) { return a.peak_factor > b.peak_factor; });
  return report;
}

DetectionReport detect(const Radargram& g, const PipelineConfig& cfg) {
  const auto pre = run_pipeline(g, cfg);
  const auto prof = profile(pre, cfg);
  return detect_in_profile(prof, g.dt_fast(), cfg.threshold_k, cfg.merge_radius_bins);
}

std::uint64_t cell_seed(std::uint64_t base_seed, double body_wall_m, double wall_radar_m) {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(body_wall_m));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(wall_radar_m));
  return h;
}

bool reference_ordering_holds(const std::vector<SweepRow>& rows) {
  std::vector<SweepRow> sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.body_wall_m != b.body_wall_m) return a.body_wall_m < b.body_wall_m;
    return a.wall_radar_m < b.wall_radar_m;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (!(sorted[i].peak_factor > sorted[i - 1].peak_factor)) return false;
  }
  return true;
}

SweepResult distance_sweep(const std::vector<std::pair<double, double>>& grid, const SceneConfig& base,
                           const PulseModel& pulse, const RadarDims& dims, const PipelineConfig& pipeline,
                           SeedPolicy policy) {
  if (grid.empty()) throw Error(ErrorCode::kEmptyGrid, "distance sweep needs at least one (x, y) cell");
  SweepResult result;
  result.rows.resize(grid.size());
  PipelineConfig inner = pipeline;
  const unsigned outer_threads = grid.size() > 1 ? pipeline.threads : 1;
  if (grid.size() > 1) inner.threads = 1;

  parallel_for(grid.size(), outer_threads, [&](std::size_t c) {
    const auto [x, y] = grid[c];
    SweepRow& row = result.rows[c];
    row.body_wall_m = x;
    row.wall_radar_m = y;
    try {
      SceneConfig scene = base;
      scene.body_wall_m = x;
      scene.wall_radar_m = y;
      if (policy == SeedPolicy::kPerCell) scene.rng_seed = cell_seed(base.rng_seed, x, y);
      const auto g = simulate(scene, pulse, dims, inner.threads);
      const auto pre = run_pipeline(g, inner);
      const auto prof = profile(pre, inner);
      const auto report = detect_in_profile(prof, g.dt_fast(), inner.threshold_k, inner.merge_radius_bins);
      if (!report.detections.empty()) {
        row.detected = true;
        row.peak_factor = report.detections.front().peak_factor;
        row.detected_freq_hz = report.detections.front().respiration_freq_hz;
      } else {
        const auto best = std::max_element(prof.bins.begin(), prof.bins.end(),
                                           [](const auto& a, const auto& b) { return a.pf.value < b.pf.value; });
        row.peak_factor = best->pf.value;
        row.detected_freq_hz = best->peak_freq_hz;
      }
    } catch (const Error& e) {
      throw Error(e.code(), "sweep cell (x=" + std::to_string(x) + " m, y=" + std::to_string(y) + " m): " + e.what());
    }
  });
  result.ordering_holds = reference_ordering_holds(result.rows);
  return result;
}

}  // namespace uwbresp
