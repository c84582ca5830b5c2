#include "evtrack/event_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace evtrack {

namespace {

// Parse one unsigned decimal field, skipping surrounding spaces/tabs.
// Returns false on empty or non-numeric input.
bool parse_u64_field(std::string_view field, std::uint64_t& out) {
  std::size_t a = 0, b = field.size();
  while (a < b && (field[a] == ' ' || field[a] == '\t')) ++a;
  while (b > a && (field[b - 1] == ' ' || field[b - 1] == '\t' || field[b - 1] == '\r')) --b;
  if (a == b) return false;
  auto res = std::from_chars(field.data() + a, field.data() + b, out);
  return res.ec == std::errc{} && res.ptr == field.data() + b;
}

std::vector<Event> parse_csv(std::string_view data, const SensorGeometry& sensor) {
  std::vector<Event> events;
  events.reserve(data.size() / 16);

  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_prev = false;
  std::uint64_t prev_t = 0;

  while (pos < data.size()) {
    ++line_no;
    std::size_t eol = data.find('\n', pos);
    std::string_view line = data.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? data.size() : eol + 1;

    // strip trailing \r, skip blanks and comments
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    if (line[first] == '#') continue;

    std::uint64_t fields[4];
    std::size_t start = 0;
    int nf = 0;
    bool line_consumed = false;
    for (; nf < 4; ++nf) {
      std::size_t comma = line.find(',', start);
      std::string_view field =
          line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                             : comma - start);
      if (!parse_u64_field(field, fields[nf]))
        throw ParseError("line " + std::to_string(line_no) + ": bad field " +
                         std::to_string(nf + 1) + " in '" + std::string(line) + "'");
      if (comma == std::string_view::npos) {
        ++nf;
        line_consumed = true;
        break;
      }
      start = comma + 1;
    }
    if (nf != 4 || !line_consumed)
      throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields in '" +
                       std::string(line) + "'");

    if (fields[3] > 1)
      throw ParseError("line " + std::to_string(line_no) + ": polarity must be 0 or 1");
    if (fields[1] >= static_cast<std::uint64_t>(sensor.width) ||
        fields[2] >= static_cast<std::uint64_t>(sensor.height))
      throw BoundsError("line " + std::to_string(line_no) + ": pixel (" +
                        std::to_string(fields[1]) + "," + std::to_string(fields[2]) +
                        ") outside " + std::to_string(sensor.width) + "x" +
                        std::to_string(sensor.height));
    if (have_prev && fields[0] < prev_t)
      throw OrderingError("line " + std::to_string(line_no) + ": timestamp " +
                          std::to_string(fields[0]) + " goes backwards (previous " +
                          std::to_string(prev_t) + ")");

    events.push_back(Event{fields[0], static_cast<std::uint16_t>(fields[1]),
                           static_cast<std::uint16_t>(fields[2]), fields[3] == 1});
    prev_t = fields[0];
    have_prev = true;
  }
  return events;
}

std::uint32_t read_u32le(const char* p) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(p[0])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(p[1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(p[2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(p[3])) << 24;
}

std::vector<Event> parse_raw(std::string_view data, const SensorGeometry& sensor) {
  constexpr std::size_t kRecord = 16;  // four little-endian uint32
  if (data.size() % kRecord != 0)
    throw ParseError("raw stream truncated: " + std::to_string(data.size() % kRecord) +
                     " stray bytes after offset " + std::to_string(data.size() / kRecord * kRecord));

  std::vector<Event> events;
  events.reserve(data.size() / kRecord);
  bool have_prev = false;
  std::uint64_t prev_t = 0;

  for (std::size_t off = 0; off < data.size(); off += kRecord) {
    const char* p = data.data() + off;
    const std::uint32_t t = read_u32le(p);
    const std::uint32_t x = read_u32le(p + 4);
    const std::uint32_t y = read_u32le(p + 8);
    const std::uint32_t pol = read_u32le(p + 12);

    if (pol > 1)
      throw BoundsError("record at byte " + std::to_string(off) + ": polarity must be 0 or 1");
    if (x >= static_cast<std::uint32_t>(sensor.width) ||
        y >= static_cast<std::uint32_t>(sensor.height))
      throw BoundsError("record at byte " + std::to_string(off) + ": pixel (" +
                        std::to_string(x) + "," + std::to_string(y) + ") outside " +
                        std::to_string(sensor.width) + "x" + std::to_string(sensor.height));
    if (have_prev && t < prev_t)
      throw OrderingError("record at byte " + std::to_string(off) + ": timestamp " +
                          std::to_string(t) + " goes backwards (previous " +
                          std::to_string(prev_t) + ")");

    events.push_back(Event{t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                           pol == 1});
    prev_t = t;
    have_prev = true;
  }
  return events;
}

void append_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

}  // namespace

std::vector<Event> parse_events(std::string_view data, EventFormat format,
                                const SensorGeometry& sensor) {
  return format == EventFormat::Csv ? parse_csv(data, sensor) : parse_raw(data, sensor);
}

std::vector<Event> load_events(const std::string& path, EventFormat format,
                               const SensorGeometry& sensor) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open event file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_events(buf.str(), format, sensor);
}

std::string events_to_csv(const std::vector<Event>& events) {
  std::string out = "# t_us,x,y,polarity\n";
  char line[64];
  for (const Event& e : events) {
    const int n = std::snprintf(line, sizeof line, "%llu,%u,%u,%u\n",
                                static_cast<unsigned long long>(e.t_us), e.x, e.y, e.on ? 1 : 0);
    out.append(line, static_cast<std::size_t>(n));
  }
  return out;
}

std::string events_to_raw(const std::vector<Event>& events) {
  std::string out;
  out.reserve(events.size() * 16);
  for (const Event& e : events) {
    append_u32le(out, static_cast<std::uint32_t>(e.t_us));
    append_u32le(out, e.x);
    append_u32le(out, e.y);
    append_u32le(out, e.on ? 1 : 0);
  }
  return out;
}

BinaryFrame aggregate_frame(const std::vector<Event>& window_events, std::uint64_t t_start_us,
                            std::uint64_t period_us, const SensorGeometry& sensor,
                            int min_count) {
  if (period_us == 0) throw ConfigError("frame period must be positive");
  if (min_count < 1) throw ConfigError("frame.min_count must be >= 1");

  std::vector<int> counts(static_cast<std::size_t>(sensor.width) * sensor.height, 0);
  for (const Event& e : window_events) {
    if (e.t_us < t_start_us || e.t_us >= t_start_us + period_us)
      throw OrderingError("event at t=" + std::to_string(e.t_us) + " outside window [" +
                          std::to_string(t_start_us) + "," +
                          std::to_string(t_start_us + period_us) + ")");
    ++counts[static_cast<std::size_t>(e.y) * sensor.width + e.x];
  }

  BinaryFrame frame(sensor.width, sensor.height);
  frame.t_start_us = t_start_us;
  frame.t_end_us = t_start_us + period_us;
  for (std::size_t i = 0; i < counts.size(); ++i) frame.bits[i] = counts[i] >= min_count;
  return frame;
}

std::vector<BinaryFrame> aggregate_frames(const std::vector<Event>& events,
                                          std::uint64_t period_us, const SensorGeometry& sensor,
                                          int min_count) {
  std::vector<BinaryFrame> frames;
  if (events.empty()) return frames;
  if (period_us == 0) throw ConfigError("frame period must be positive");
  if (min_count < 1) throw ConfigError("frame.min_count must be >= 1");

  const std::uint64_t t0 = events.front().t_us / period_us * period_us;
  std::size_t i = 0;
  for (std::uint64_t start = t0; i < events.size(); start += period_us) {
    BinaryFrame frame(sensor.width, sensor.height);
    frame.index = frames.size();
    frame.t_start_us = start;
    frame.t_end_us = start + period_us;
    std::vector<int> counts(frame.bits.size(), 0);
    while (i < events.size() && events[i].t_us < start + period_us) {
      const Event& e = events[i];
      if (e.t_us < start)
        throw OrderingError("event at t=" + std::to_string(e.t_us) +
                            " out of order during framing");
      ++counts[static_cast<std::size_t>(e.y) * sensor.width + e.x];
      ++i;
    }
    for (std::size_t k = 0; k < counts.size(); ++k) frame.bits[k] = counts[k] >= min_count;
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace evtrack
