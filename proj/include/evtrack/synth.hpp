#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "evtrack/events.hpp"
#include "evtrack/geometry.hpp"

namespace evtrack {

/// A rectangular object moving at constant velocity. Events are emitted
/// from its outline band (the outermost `edge_thickness` pixels of the
/// box), mimicking a change detector that only sees moving contrast
/// edges.
struct SceneObject {
  double x0 = 0.0;  ///< top-left at t = 0, may start off-sensor
  double y0 = 0.0;
  int w = 0;
  int h = 0;
  double vx = 0.0;  ///< pixels per second
  double vy = 0.0;
  double event_rate = 150.0;  ///< events per second per outline pixel
  double t_enter_s = 0.0;
  double t_exit_s = std::numeric_limits<double>::infinity();
};

struct SceneSpec {
  SensorGeometry sensor;
  double duration_s = 1.0;
  double noise_rate = 0.0;  ///< uniform noise, events per second per pixel
  int edge_thickness = 2;
  std::uint64_t seed = 1;
  std::vector<SceneObject> objects;
};

struct GroundTruthSample {
  std::uint64_t t_us = 0;
  Region region;
};

struct GroundTruthTrack {
  std::uint64_t object_id = 0;
  std::vector<GroundTruthSample> samples;
};

struct Scene {
  std::vector<Event> events;  // sorted by (t, x, y, polarity)
  std::vector<GroundTruthTrack> ground_truth;
};

/// Generate the event stream and ground truth of a scene. Object
/// positions follow x(t) = x0 + vx*t exactly; emission is Bernoulli per
/// outline pixel per 1 ms tick with uniform timestamp jitter inside the
/// tick, plus Poisson background noise. Ground truth is sampled at the
/// ends of consecutive `frame_period_us` windows as the rounded object
/// box clipped to the sensor (off-sensor samples are omitted). The same
/// spec and seed always produce byte-identical output.
Scene generate_scene(const SceneSpec& spec, std::uint64_t frame_period_us);

/// Named ready-made scenes:
///   single_const_velocity   one object moving right
///   crossing_opposite       two objects passing through each other
///   overtake_same_direction fast object overtaking a slow one
///   enter_exit              object crossing the full sensor width
///   nine_objects            3x3 grid, one more object than tracker slots
///   human_scale             small slow object (hard case)
/// ConfigError for an unknown name.
SceneSpec scene_preset(std::string_view name);
std::vector<std::string> scene_preset_names();

/// Scale all object event rates (used to reach benchmark event rates).
void scale_rates(SceneSpec& spec, double factor);

/// Text round-trip of a scene spec (key = value lines; objects as
/// object.<i>.<field>).
std::string scene_to_text(const SceneSpec& spec);
SceneSpec parse_scene_text(std::string_view text);

}  // namespace evtrack
