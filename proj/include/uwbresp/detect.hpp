#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "uwbresp/config.hpp"
#include "uwbresp/radargram.hpp"
#include "uwbresp/simulator.hpp"
#include "uwbresp/spectral.hpp"

namespace uwbresp {

struct Detection {
  std::size_t range_bin = 0;  // bin with the strongest respiration line in the cluster
  double range_m = 0.0;
  double peak_factor = 0.0;  // largest P in the cluster
  double respiration_freq_hz = 0.0;
  std::size_t first_bin = 0;  // cluster extent, inclusive
  std::size_t last_bin = 0;
};

struct ProfileStats {
  double mean = 0.0;
  double std = 0.0;
  double median = 0.0;
};

struct DetectionReport {
  std::vector<Detection> detections;  // descending peak_factor
  double threshold_used = 0.0;
  ProfileStats profile_stats;
};

inline constexpr double kMadToSigma = 1.4826;

/// median(P) + k * 1.4826 * MAD(P) over non-degenerate bins. Throws
/// Error(kNoUsableSpectrum) when every bin is degenerate.
double adaptive_threshold(const PeakFactorProfile& profile, double k);

/// Thresholds a profile and merges hits no more than `merge_radius` bins apart.
DetectionReport detect_in_profile(const PeakFactorProfile& profile, double dt_fast, double k,
                                  std::size_t merge_radius = kDefaultMergeRadius);

/// Full chain: run_pipeline -> profile -> adaptive_threshold -> merge. An
/// all-zero radargram yields no detections.
DetectionReport detect(const Radargram& g, const PipelineConfig& cfg);

enum class SeedPolicy {
  kFixed,    // every cell uses base rng_seed
  kPerCell,  // seed mixed from rng_seed and the cell's (x, y)
};

std::uint64_t cell_seed(std::uint64_t base_seed, double body_wall_m, double wall_radar_m);

struct SweepRow {
  double body_wall_m = 0.0;
  double wall_radar_m = 0.0;
  double peak_factor = 0.0;  // best detection, or the profile maximum if none
  double detected_freq_hz = 0.0;
  bool detected = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Rows ordered by (x, then y) show strictly increasing P.
  bool ordering_holds = false;
};

/// True when rows sorted lexicographically by (x, y) have strictly increasing
/// peak_factor. Vacuously true for fewer than two rows.
bool reference_ordering_holds(const std::vector<SweepRow>& rows);

/// Cells are simulated independently (in parallel when pipeline.threads
/// allows) and reported in grid order. Throws Error(kEmptyGrid) for an empty
/// grid; a failing cell is rethrown with its coordinates in the message.
SweepResult distance_sweep(const std::vector<std::pair<double, double>>& grid,
                           const SceneConfig& base, const PulseModel& pulse, const RadarDims& dims,
                           const PipelineConfig& pipeline, SeedPolicy policy = SeedPolicy::kPerCell);

}  // namespace uwbresp
