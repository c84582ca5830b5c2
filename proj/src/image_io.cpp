#include "evtrack/image_io.hpp"

#include <charconv>

namespace evtrack {

std::string encode_pbm(const BitImage& image) {
  std::string out = "P4\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n";
  const int row_bytes = (image.width + 7) / 8;
  for (int y = 0; y < image.height; ++y) {
    for (int b = 0; b < row_bytes; ++b) {
      std::uint8_t byte = 0;
      for (int bit = 0; bit < 8; ++bit) {
        const int x = b * 8 + bit;
        if (x < image.width && image.test(x, y)) byte |= static_cast<std::uint8_t>(0x80 >> bit);
      }
      out.push_back(static_cast<char>(byte));
    }
  }
  return out;
}

BitImage decode_pbm(std::string_view data) {
  // header: "P4", whitespace/comments, width, height, single whitespace
  std::size_t pos = 0;
  const auto skip_space = [&] {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (data[pos] == ' ' || data[pos] == '\t' || data[pos] == '\n' ||
                 data[pos] == '\r') {
        ++pos;
      } else {
        break;
      }
    }
  };
  const auto read_int = [&]() -> int {
    skip_space();
    int v = 0;
    auto res = std::from_chars(data.data() + pos, data.data() + data.size(), v);
    if (res.ec != std::errc{}) throw ParseError("pbm: bad header integer");
    pos = static_cast<std::size_t>(res.ptr - data.data());
    return v;
  };

  if (data.size() < 2 || data[0] != 'P' || data[1] != '4') throw ParseError("pbm: not a P4 file");
  pos = 2;
  const int w = read_int();
  const int h = read_int();
  if (w < 1 || h < 1) throw ParseError("pbm: bad dimensions");
  if (pos >= data.size()) throw ParseError("pbm: truncated header");
  ++pos;  // single whitespace byte after the height

  const int row_bytes = (w + 7) / 8;
  if (data.size() - pos < static_cast<std::size_t>(row_bytes) * h)
    throw ParseError("pbm: truncated pixel data");

  BitImage image(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::uint8_t byte =
          static_cast<std::uint8_t>(data[pos + static_cast<std::size_t>(y) * row_bytes + x / 8]);
      image.set(x, y, (byte >> (7 - x % 8)) & 1);
    }
  return image;
}

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || x >= width || y < 0 || y >= height) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  px[i] = r;
  px[i + 1] = g;
  px[i + 2] = b;
}

std::string encode_ppm(const RgbImage& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(image.px.data()), image.px.size());
  return out;
}

namespace {

struct Color {
  std::uint8_t r, g, b;
};

// palette keyed by track id, avoiding green (reserved for ground truth)
constexpr Color kPalette[] = {
    {255, 80, 80}, {80, 160, 255}, {255, 200, 0},  {200, 80, 255},
    {0, 220, 220}, {255, 130, 40}, {255, 80, 180}, {160, 160, 255},
};

void draw_box(RgbImage& img, const Region& r, Color c) {
  for (int x = r.x; x < r.right(); ++x) {
    img.set(x, r.y, c.r, c.g, c.b);
    img.set(x, r.bottom() - 1, c.r, c.g, c.b);
  }
  for (int y = r.y; y < r.bottom(); ++y) {
    img.set(r.x, y, c.r, c.g, c.b);
    img.set(r.right() - 1, y, c.r, c.g, c.b);
  }
}

}  // namespace

RgbImage render_overlay(const BinaryFrame& frame, std::span<const TrackRecord> tracks,
                        std::span<const Region> gt_boxes) {
  RgbImage img(frame.width, frame.height);
  for (int y = 0; y < frame.height; ++y)
    for (int x = 0; x < frame.width; ++x)
      if (frame.test(x, y)) img.set(x, y, 180, 180, 180);

  for (const Region& g : gt_boxes) draw_box(img, g, Color{0, 255, 0});
  for (const TrackRecord& t : tracks)
    draw_box(img, t.region(), kPalette[t.id % (sizeof kPalette / sizeof kPalette[0])]);
  return img;
}

}  // namespace evtrack
