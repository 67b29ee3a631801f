#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "uwbresp/config.hpp"
#include "uwbresp/radargram.hpp"
#include "uwbresp/simulator.hpp"

namespace uwbresp {

// Radargram file: "UWBR", u32 version (1), u32 M, u32 N, f64 dt_fast,
// f64 dt_slow, then M*N f64 samples range-bin-major. All little-endian.
inline constexpr char kRadargramMagic[4] = {'U', 'W', 'B', 'R'};
inline constexpr std::uint32_t kRadargramVersion = 1;
inline constexpr std::size_t kRadargramHeaderSize = 32;

std::vector<std::uint8_t> encode_radargram(const Radargram& g);
Radargram decode_radargram(std::span<const std::uint8_t> bytes);

void write_radargram(const std::filesystem::path& path, const Radargram& g);
Radargram read_radargram(const std::filesystem::path& path);

/// Writes via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

struct RunConfig {
  SceneConfig scene;
  PulseModel pulse;
  PipelineConfig pipeline;
  RadarDims dims;
};

/// Parses the JSON run config. Every section and key is optional; unknown
/// keys, wrong types and invalid values raise Error(kConfigParse) with the
/// offending field path (or line/column for syntax errors).
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string dump_run_config(const RunConfig& cfg);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace uwbresp
