#include "evtrack/config.hpp"

#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include "evtrack/records.hpp"

namespace evtrack {

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  const std::size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

long long to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad integer '" + value + "'");
  }
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad number '" + value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': bad boolean '" + value +
                    "' (want on/off/true/false/1/0)");
}

int int_in(const std::string& key, const std::string& value, long long lo, long long hi) {
  const long long v = to_int(key, value);
  if (v < lo || v > hi)
    throw ConfigError("config key '" + key + "': " + value + " outside [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

double dbl_in(const std::string& key, const std::string& value, double lo, double hi) {
  const double v = to_double(key, value);
  if (!(v >= lo) || !(v <= hi))
    throw ConfigError("config key '" + key + "': " + value + " outside [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "]");
  return v;
}

constexpr long long kIntMax = 1ll << 40;  // generous cap for count-like keys

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"sensor.width", [](auto& c, auto& k, auto& v) { c.sensor.width = int_in(k, v, 1, 65535); }},
      {"sensor.height", [](auto& c, auto& k, auto& v) { c.sensor.height = int_in(k, v, 1, 65535); }},
      {"frame.period_us", [](auto& c, auto& k, auto& v) { c.frame.period_us = static_cast<std::uint64_t>(to_int(k, v)); if (c.frame.period_us == 0) throw ConfigError("config key '" + k + "': must be positive"); }},
      {"frame.min_count", [](auto& c, auto& k, auto& v) { c.frame.min_count = int_in(k, v, 1, kIntMax); }},
      {"rp.density_threshold", [](auto& c, auto& k, auto& v) { c.rp.density_threshold = int_in(k, v, 0, kIntMax); }},
      {"rp.min_run", [](auto& c, auto& k, auto& v) { c.rp.min_run = int_in(k, v, 1, kIntMax); }},
      {"rp.max_gap", [](auto& c, auto& k, auto& v) { c.rp.max_gap = int_in(k, v, 0, kIntMax); }},
      {"rp.min_fill", [](auto& c, auto& k, auto& v) { c.rp.min_fill = dbl_in(k, v, 0.0, 1.0); }},
      {"rp.min_area", [](auto& c, auto& k, auto& v) { c.rp.min_area = int_in(k, v, 1, kIntMax); }},
      {"rp.median_filter", [](auto& c, auto& k, auto& v) { c.rp.median_filter = to_bool(k, v); }},
      {"trk.alpha", [](auto& c, auto& k, auto& v) { c.trk.alpha = dbl_in(k, v, 0.0, 1.0); }},
      {"trk.overlap_threshold", [](auto& c, auto& k, auto& v) { c.trk.overlap_ratio_threshold = dbl_in(k, v, 0.0, 1.0); }},
      {"trk.max_tracks", [](auto& c, auto& k, auto& v) { c.trk.max_tracks = int_in(k, v, 1, 4096); }},
      {"trk.max_unlocks", [](auto& c, auto& k, auto& v) { c.trk.max_unlocks = int_in(k, v, 1, kIntMax); }},
      {"trk.occlusion_horizon", [](auto& c, auto& k, auto& v) { c.trk.occlusion_horizon = int_in(k, v, 1, 64); }},
      {"fx.enabled", [](auto& c, auto& k, auto& v) { c.fx.enabled = to_bool(k, v); }},
      {"fx.pos_bits", [](auto& c, auto& k, auto& v) { c.fx.pos_int_bits = int_in(k, v, 0, 32); }},
      {"fx.pos_frac_bits", [](auto& c, auto& k, auto& v) { c.fx.pos_frac_bits = int_in(k, v, 0, 32); }},
      {"fx.vel_int_bits", [](auto& c, auto& k, auto& v) { c.fx.vel_int_bits = int_in(k, v, 0, 32); }},
      {"fx.vel_frac_bits", [](auto& c, auto& k, auto& v) { c.fx.vel_frac_bits = int_in(k, v, 0, 32); }},
      {"ebms.radius", [](auto& c, auto& k, auto& v) { c.ebms.radius = dbl_in(k, v, 0.5, 1024.0); }},
      {"ebms.eta", [](auto& c, auto& k, auto& v) { c.ebms.eta = dbl_in(k, v, 0.0, 1.0); }},
      {"ebms.support_threshold", [](auto& c, auto& k, auto& v) { c.ebms.support_threshold = int_in(k, v, 1, kIntMax); }},
      {"ebms.timeout_us", [](auto& c, auto& k, auto& v) { c.ebms.timeout_us = static_cast<std::uint64_t>(int_in(k, v, 1, kIntMax)); }},
      {"ebms.horizon_us", [](auto& c, auto& k, auto& v) { c.ebms.horizon_us = static_cast<std::uint64_t>(int_in(k, v, 1, kIntMax)); }},
      {"ebms.max_clusters", [](auto& c, auto& k, auto& v) { c.ebms.max_clusters = int_in(k, v, 1, 65536); }},
      {"export.size", [](auto& c, auto& k, auto& v) { c.exp.size = int_in(k, v, 1, 4096); }},
      {"export.bits_per_spike", [](auto& c, auto& k, auto& v) { c.exp.bits_per_spike = int_in(k, v, 1, kIntMax); }},
      {"eval.interpolate", [](auto& c, auto& k, auto& v) { c.eval.interpolate = to_bool(k, v); }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = static_cast<std::uint64_t>(to_int(k, v)); }},
  };
  return table;
}

}  // namespace

void apply_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, value);
}

void apply_config_text(PipelineConfig& cfg, std::string_view text) {
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
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    apply_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void load_config_file(PipelineConfig& cfg, const std::string& path) {
  apply_config_text(cfg, read_file(path));
}

void apply_env_overrides(PipelineConfig& cfg, const char* prefix) {
  for (const auto& [key, setter] : setters()) {
    std::string env_name = prefix;
    for (char c : key)
      env_name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* value = std::getenv(env_name.c_str())) setter(cfg, key, value);
  }
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [key, _] : setters()) keys.push_back(key);
  return keys;
}

std::string config_to_text(const PipelineConfig& cfg) {
  std::ostringstream out;
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "sensor.width = " << cfg.sensor.width << "\n";
  out << "sensor.height = " << cfg.sensor.height << "\n";
  out << "frame.period_us = " << cfg.frame.period_us << "\n";
  out << "frame.min_count = " << cfg.frame.min_count << "\n";
  out << "rp.density_threshold = " << cfg.rp.density_threshold << "\n";
  out << "rp.min_run = " << cfg.rp.min_run << "\n";
  out << "rp.max_gap = " << cfg.rp.max_gap << "\n";
  out << "rp.min_fill = " << num(cfg.rp.min_fill) << "\n";
  out << "rp.min_area = " << cfg.rp.min_area << "\n";
  out << "rp.median_filter = " << (cfg.rp.median_filter ? "on" : "off") << "\n";
  out << "trk.alpha = " << num(cfg.trk.alpha) << "\n";
  out << "trk.overlap_threshold = " << num(cfg.trk.overlap_ratio_threshold) << "\n";
  out << "trk.max_tracks = " << cfg.trk.max_tracks << "\n";
  out << "trk.max_unlocks = " << cfg.trk.max_unlocks << "\n";
  out << "trk.occlusion_horizon = " << cfg.trk.occlusion_horizon << "\n";
  out << "fx.enabled = " << (cfg.fx.enabled ? "on" : "off") << "\n";
  out << "fx.pos_bits = " << cfg.fx.pos_int_bits << "\n";
  out << "fx.pos_frac_bits = " << cfg.fx.pos_frac_bits << "\n";
  out << "fx.vel_int_bits = " << cfg.fx.vel_int_bits << "\n";
  out << "fx.vel_frac_bits = " << cfg.fx.vel_frac_bits << "\n";
  out << "ebms.radius = " << num(cfg.ebms.radius) << "\n";
  out << "ebms.eta = " << num(cfg.ebms.eta) << "\n";
  out << "ebms.support_threshold = " << cfg.ebms.support_threshold << "\n";
  out << "ebms.timeout_us = " << cfg.ebms.timeout_us << "\n";
  out << "ebms.horizon_us = " << cfg.ebms.horizon_us << "\n";
  out << "ebms.max_clusters = " << cfg.ebms.max_clusters << "\n";
  out << "export.size = " << cfg.exp.size << "\n";
  out << "export.bits_per_spike = " << cfg.exp.bits_per_spike << "\n";
  out << "eval.interpolate = " << (cfg.eval.interpolate ? "on" : "off") << "\n";
  out << "seed = " << cfg.seed << "\n";
  return out.str();
}

}  // namespace evtrack
