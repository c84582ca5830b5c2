#include "evtrack/records.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "evtrack/events.hpp"

namespace evtrack {

std::string track_records_to_jsonl(std::span<const TrackRecord> records) {
  std::string out;
  for (const TrackRecord& r : records) {
    nlohmann::ordered_json j;
    j["t_us"] = r.t_us;
    j["id"] = r.id;
    j["x"] = r.x;
    j["y"] = r.y;
    j["w"] = r.w;
    j["h"] = r.h;
    j["vx"] = r.vx;
    j["vy"] = r.vy;
    j["state"] = r.state;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<TrackRecord> parse_track_jsonl(std::string_view text) {
  std::vector<TrackRecord> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError("track record line " + std::to_string(line_no) + ": invalid JSON");
    try {
      TrackRecord r;
      r.t_us = j.at("t_us").get<std::uint64_t>();
      r.id = j.at("id").get<std::uint64_t>();
      r.x = j.at("x").get<int>();
      r.y = j.at("y").get<int>();
      r.w = j.at("w").get<int>();
      r.h = j.at("h").get<int>();
      r.vx = j.at("vx").get<double>();
      r.vy = j.at("vy").get<double>();
      r.state = j.at("state").get<std::string>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("track record line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string ground_truth_to_csv(std::span<const GroundTruthTrack> tracks) {
  std::string out = "# id,t_us,x,y,w,h\n";
  char line[96];
  for (const GroundTruthTrack& track : tracks) {
    for (const GroundTruthSample& s : track.samples) {
      const int n = std::snprintf(line, sizeof line, "%llu,%llu,%d,%d,%d,%d\n",
                                  static_cast<unsigned long long>(track.object_id),
                                  static_cast<unsigned long long>(s.t_us), s.region.x, s.region.y,
                                  s.region.w, s.region.h);
      out.append(line, static_cast<std::size_t>(n));
    }
  }
  return out;
}

std::vector<GroundTruthTrack> parse_ground_truth_csv(std::string_view text) {
  std::map<std::uint64_t, GroundTruthTrack> by_id;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;

    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;

    long long fields[6];
    std::size_t start = 0;
    for (int f = 0; f < 6; ++f) {
      std::size_t comma = line.find(',', start);
      if ((comma == std::string_view::npos) != (f == 5))
        throw ParseError("ground truth line " + std::to_string(line_no) + ": expected 6 fields");
      std::string_view field =
          line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                             : comma - start);
      while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.remove_suffix(1);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      auto res = std::from_chars(field.data(), field.data() + field.size(), fields[f]);
      if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
        throw ParseError("ground truth line " + std::to_string(line_no) + ": bad field " +
                         std::to_string(f + 1));
      start = comma + 1;
    }
    if (fields[0] < 0 || fields[1] < 0 || fields[4] < 1 || fields[5] < 1)
      throw BoundsError("ground truth line " + std::to_string(line_no) + ": invalid values");

    GroundTruthTrack& track = by_id[static_cast<std::uint64_t>(fields[0])];
    track.object_id = static_cast<std::uint64_t>(fields[0]);
    track.samples.push_back(
        GroundTruthSample{static_cast<std::uint64_t>(fields[1]),
                          Region{static_cast<int>(fields[2]), static_cast<int>(fields[3]),
                                 static_cast<int>(fields[4]), static_cast<int>(fields[5])}});
  }

  std::vector<GroundTruthTrack> out;
  out.reserve(by_id.size());
  for (auto& [id, track] : by_id) out.push_back(std::move(track));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot create file: " + path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("failed writing file: " + path);
}

}  // namespace evtrack
