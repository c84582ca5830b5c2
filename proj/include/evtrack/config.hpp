#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "evtrack/ebms.hpp"
#include "evtrack/event_io.hpp"
#include "evtrack/quant.hpp"
#include "evtrack/regionprop.hpp"
#include "evtrack/tracker.hpp"

namespace evtrack {

struct FrameConfig {
  std::uint64_t period_us = 33000;
  int min_count = 1;
};

struct ExportConfig {
  int size = 42;
  int bits_per_spike = 24;
};

struct EvalSettings {
  bool interpolate = false;
};

/// Every tunable of the engine, grouped by module. Values come from, in
/// increasing precedence: built-in defaults, a config file, environment
/// variables (ETRK_ prefix), command-line flags.
struct PipelineConfig {
  SensorGeometry sensor;
  FrameConfig frame;
  RegionPropConfig rp;
  TrackerConfig trk;
  FixedPointConfig fx;
  EbmsConfig ebms;
  ExportConfig exp;
  EvalSettings eval;
  std::uint64_t seed = 1;
};

/// Set one dotted key ("trk.alpha = 0.5"). ConfigError on unknown keys
/// or values that do not parse / are out of domain.
void apply_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Parse `key = value` lines; '#' starts a comment, blank lines are
/// skipped.
void apply_config_text(PipelineConfig& cfg, std::string_view text);
void load_config_file(PipelineConfig& cfg, const std::string& path);

/// Apply ETRK_* environment overrides: key "trk.alpha" reads
/// ETRK_TRK_ALPHA.
void apply_env_overrides(PipelineConfig& cfg, const char* prefix = "ETRK_");

std::vector<std::string> config_keys();
std::string config_to_text(const PipelineConfig& cfg);

}  // namespace evtrack
