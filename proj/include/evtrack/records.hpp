#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evtrack/geometry.hpp"
#include "evtrack/synth.hpp"

namespace evtrack {

/// One reported track sample, as written to the JSONL track output:
/// {"t_us":..,"id":..,"x":..,"y":..,"w":..,"h":..,"vx":..,"vy":..,"state":".."}
struct TrackRecord {
  std::uint64_t t_us = 0;
  std::uint64_t id = 0;
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  double vx = 0.0;
  double vy = 0.0;
  std::string state = "Locked";

  Region region() const { return Region{x, y, w, h}; }
};

std::string track_records_to_jsonl(std::span<const TrackRecord> records);
std::vector<TrackRecord> parse_track_jsonl(std::string_view text);

/// Ground-truth csv: `id,t_us,x,y,w,h` with a `#` header line.
std::string ground_truth_to_csv(std::span<const GroundTruthTrack> tracks);
std::vector<GroundTruthTrack> parse_ground_truth_csv(std::string_view text);

std::string read_file(const std::string& path);                  // ParseError on failure
void write_file(const std::string& path, std::string_view data); // Error on failure

}  // namespace evtrack
