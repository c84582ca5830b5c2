#include "evtrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace evtrack {

namespace {

// splitmix64, used to derive independent stream seeds from (seed, index)
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic distributions over a fixed 64-bit generator. The standard
// library's distribution objects are implementation-defined, so all
// sampling here is hand-rolled to keep outputs identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix64(seed)) {}

  std::uint64_t next() {
    // xorshift64*
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545f4914f6cdd1dULL;
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  bool bernoulli(double p) { return uniform() < p; }

  // Knuth's method; tick means here are small (< 100)
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::uint64_t state_;
};

constexpr std::uint64_t kTickUs = 1000;

Region raster_box(const SceneObject& o, double t_s) {
  return Region{round_half_up(o.x0 + o.vx * t_s), round_half_up(o.y0 + o.vy * t_s), o.w, o.h};
}

void validate(const SceneSpec& spec) {
  if (spec.sensor.width < 1 || spec.sensor.height < 1)
    throw ConfigError("scene sensor size must be positive");
  if (spec.duration_s <= 0.0) throw ConfigError("scene duration must be positive");
  if (spec.noise_rate < 0.0) throw ConfigError("scene noise rate must be non-negative");
  if (spec.edge_thickness < 1) throw ConfigError("scene edge thickness must be >= 1");
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const SceneObject& o = spec.objects[i];
    if (o.w < 1 || o.h < 1)
      throw ConfigError("scene object " + std::to_string(i) + " has empty size");
    if (o.event_rate < 0.0)
      throw ConfigError("scene object " + std::to_string(i) + " has negative event rate");
    if (o.t_enter_s < 0.0 || o.t_exit_s <= o.t_enter_s)
      throw ConfigError("scene object " + std::to_string(i) + " has an invalid active interval");
  }
}

}  // namespace

Scene generate_scene(const SceneSpec& spec, std::uint64_t frame_period_us) {
  validate(spec);
  if (frame_period_us == 0) throw ConfigError("frame period must be positive");

  Scene scene;
  const std::uint64_t duration_us = static_cast<std::uint64_t>(spec.duration_s * 1e6);

  // objects: one independent stream each, so scene edits do not reshuffle
  // the other objects' events
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const SceneObject& o = spec.objects[i];
    Rng rng(mix64(spec.seed) ^ mix64(i + 1));
    const double p_emit = std::min(1.0, o.event_rate * (kTickUs * 1e-6));

    const std::uint64_t start_us =
        static_cast<std::uint64_t>(std::max(0.0, o.t_enter_s) * 1e6) / kTickUs * kTickUs;
    const std::uint64_t stop_us = std::min(
        duration_us, o.t_exit_s == std::numeric_limits<double>::infinity()
                         ? duration_us
                         : static_cast<std::uint64_t>(o.t_exit_s * 1e6));

    for (std::uint64_t tick = start_us; tick < stop_us; tick += kTickUs) {
      const Region box = raster_box(o, static_cast<double>(tick) * 1e-6);
      const int inset = spec.edge_thickness;
      for (int y = box.y; y < box.bottom(); ++y) {
        for (int x = box.x; x < box.right(); ++x) {
          const bool on_band = x < box.x + inset || x >= box.right() - inset ||
                               y < box.y + inset || y >= box.bottom() - inset;
          if (!on_band) continue;
          if (!spec.sensor.contains(x, y)) continue;
          if (!rng.bernoulli(p_emit)) continue;
          const std::uint64_t t = tick + rng.below(kTickUs);
          if (t >= stop_us) continue;
          scene.events.push_back(Event{t, static_cast<std::uint16_t>(x),
                                       static_cast<std::uint16_t>(y), rng.bernoulli(0.5)});
        }
      }
    }
  }

  // background noise, its own stream
  if (spec.noise_rate > 0.0) {
    Rng rng(mix64(spec.seed) ^ mix64(0));
    const double mean_per_tick = spec.noise_rate * spec.sensor.width * spec.sensor.height *
                                 (kTickUs * 1e-6);
    for (std::uint64_t tick = 0; tick < duration_us; tick += kTickUs) {
      const int n = rng.poisson(mean_per_tick);
      for (int k = 0; k < n; ++k) {
        const std::uint16_t x = static_cast<std::uint16_t>(rng.below(spec.sensor.width));
        const std::uint16_t y = static_cast<std::uint16_t>(rng.below(spec.sensor.height));
        const std::uint64_t t = tick + rng.below(kTickUs);
        if (t >= duration_us) continue;
        scene.events.push_back(Event{t, x, y, rng.bernoulli(0.5)});
      }
    }
  }

  std::sort(scene.events.begin(), scene.events.end(), [](const Event& a, const Event& b) {
    if (a.t_us != b.t_us) return a.t_us < b.t_us;
    if (a.y != b.y) return a.y < b.y;
    if (a.x != b.x) return a.x < b.x;
    return a.on < b.on;
  });

  // ground truth at frame boundaries (frames anchored at t = 0)
  const Region sensor_box{0, 0, spec.sensor.width, spec.sensor.height};
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const SceneObject& o = spec.objects[i];
    GroundTruthTrack track;
    track.object_id = i + 1;
    for (std::uint64_t t = frame_period_us; t <= duration_us; t += frame_period_us) {
      const double t_s = static_cast<double>(t) * 1e-6;
      if (t_s < o.t_enter_s || t_s > o.t_exit_s) continue;
      const Region clipped = intersect(raster_box(o, t_s), sensor_box);
      if (clipped.empty()) continue;
      track.samples.push_back(GroundTruthSample{t, clipped});
    }
    if (!track.samples.empty()) scene.ground_truth.push_back(std::move(track));
  }
  return scene;
}

SceneSpec scene_preset(std::string_view name) {
  SceneSpec s;
  s.noise_rate = 0.05;

  if (name == "single_const_velocity") {
    // velocity picked so the box advances exactly 4 px per 33 ms frame
    s.duration_s = 1.05;
    s.noise_rate = 0.02;
    s.objects = {SceneObject{20, 80, 24, 18, 4000.0 / 33.0, 0, 200.0, 0.0}};
  } else if (name == "crossing_opposite") {
    s.duration_s = 2.0;
    s.objects = {SceneObject{30, 81, 24, 18, 90, 0, 150.0, 0.0},
                 SceneObject{186, 81, 24, 18, -90, 0, 150.0, 0.0}};
  } else if (name == "overtake_same_direction") {
    s.duration_s = 1.6;
    s.objects = {SceneObject{10, 78, 30, 20, 120, 0, 150.0, 0.0},
                 SceneObject{90, 82, 24, 18, 40, 0, 150.0, 0.0}};
  } else if (name == "enter_exit") {
    s.duration_s = 2.6;
    s.objects = {SceneObject{-30, 80, 24, 18, 120, 0, 150.0, 0.0}};
  } else if (name == "nine_objects") {
    s.duration_s = 1.0;
    s.noise_rate = 0.02;
    for (int row = 0; row < 3; ++row)
      for (int col = 0; col < 3; ++col)
        s.objects.push_back(
            SceneObject{20.0 + 70.0 * col, 20.0 + 55.0 * row, 18, 14, 25, 0, 150.0, 0.0});
  } else if (name == "human_scale") {
    s.duration_s = 2.0;
    s.objects = {SceneObject{30, 100, 8, 16, 12, 0, 80.0, 0.0}};
  } else {
    throw ConfigError("unknown scene preset '" + std::string(name) + "'");
  }
  return s;
}

std::vector<std::string> scene_preset_names() {
  return {"single_const_velocity", "crossing_opposite", "overtake_same_direction",
          "enter_exit",            "nine_objects",      "human_scale"};
}

void scale_rates(SceneSpec& spec, double factor) {
  if (factor <= 0.0) throw ConfigError("rate scale must be positive");
  for (SceneObject& o : spec.objects) o.event_rate *= factor;
  spec.noise_rate *= factor;
}

namespace {

std::string fmt_double(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ConfigError("bad numeric value '" + s + "'");
  return v;
}

}  // namespace

std::string scene_to_text(const SceneSpec& spec) {
  std::ostringstream out;
  out << "# scene description\n";
  out << "sensor.width = " << spec.sensor.width << "\n";
  out << "sensor.height = " << spec.sensor.height << "\n";
  out << "duration_s = " << fmt_double(spec.duration_s) << "\n";
  out << "noise_rate = " << fmt_double(spec.noise_rate) << "\n";
  out << "edge_thickness = " << spec.edge_thickness << "\n";
  out << "seed = " << spec.seed << "\n";
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const SceneObject& o = spec.objects[i];
    const std::string p = "object." + std::to_string(i) + ".";
    out << p << "x0 = " << fmt_double(o.x0) << "\n";
    out << p << "y0 = " << fmt_double(o.y0) << "\n";
    out << p << "w = " << o.w << "\n";
    out << p << "h = " << o.h << "\n";
    out << p << "vx = " << fmt_double(o.vx) << "\n";
    out << p << "vy = " << fmt_double(o.vy) << "\n";
    out << p << "rate = " << fmt_double(o.event_rate) << "\n";
    out << p << "t_enter = " << fmt_double(o.t_enter_s) << "\n";
    out << p << "t_exit = " << fmt_double(o.t_exit_s) << "\n";
  }
  return out.str();
}

SceneSpec parse_scene_text(std::string_view text) {
  SceneSpec spec;
  std::map<std::size_t, SceneObject> objects;

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t eol = text.find('\n', pos);
    std::string line(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                    : eol - pos));
    pos = eol == std::string_view::npos ? text.size() : eol + 1;

    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const std::size_t a = s.find_first_not_of(" \t\r");
      const std::size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("scene line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    try {
      if (key == "sensor.width") spec.sensor.width = std::stoi(value);
      else if (key == "sensor.height") spec.sensor.height = std::stoi(value);
      else if (key == "duration_s") spec.duration_s = parse_double(value);
      else if (key == "noise_rate") spec.noise_rate = parse_double(value);
      else if (key == "edge_thickness") spec.edge_thickness = std::stoi(value);
      else if (key == "seed") spec.seed = std::stoull(value);
      else if (key.starts_with("object.")) {
        const std::size_t dot = key.find('.', 7);
        if (dot == std::string::npos) throw ConfigError("bad object key");
        const std::size_t idx = std::stoul(key.substr(7, dot - 7));
        const std::string field = key.substr(dot + 1);
        SceneObject& o = objects[idx];
        if (field == "x0") o.x0 = parse_double(value);
        else if (field == "y0") o.y0 = parse_double(value);
        else if (field == "w") o.w = std::stoi(value);
        else if (field == "h") o.h = std::stoi(value);
        else if (field == "vx") o.vx = parse_double(value);
        else if (field == "vy") o.vy = parse_double(value);
        else if (field == "rate") o.event_rate = parse_double(value);
        else if (field == "t_enter") o.t_enter_s = parse_double(value);
        else if (field == "t_exit") o.t_exit_s = parse_double(value);
        else throw ConfigError("unknown object field '" + field + "'");
      } else {
        throw ConfigError("unknown scene key '" + key + "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("scene line " + std::to_string(line_no) + ": bad value '" + value + "'");
    }
  }

  for (auto& [idx, obj] : objects) {
    if (idx != spec.objects.size())
      throw ConfigError("scene object indices must be consecutive from 0");
    spec.objects.push_back(obj);
  }
  return spec;
}

}  // namespace evtrack
