#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evtrack/classify_export.hpp"
#include "evtrack/events.hpp"
#include "evtrack/records.hpp"

namespace evtrack {

/// Binary PBM (P4), one bit per pixel, rows padded to whole bytes.
std::string encode_pbm(const BitImage& image);
BitImage decode_pbm(std::string_view data);

/// 8-bit RGB image for overlays.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> px;  // 3 bytes per pixel, row-major

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), px(static_cast<std::size_t>(w) * h * 3, 0) {}

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

/// Binary PPM (P6).
std::string encode_ppm(const RgbImage& image);

/// Debug overlay for one frame: active pixels in gray, ground-truth
/// boxes in green, reported tracks in a fixed palette keyed by id.
RgbImage render_overlay(const BinaryFrame& frame, std::span<const TrackRecord> tracks,
                        std::span<const Region> gt_boxes);

}  // namespace evtrack
