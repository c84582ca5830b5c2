#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace evtrack {

/// Round to nearest integer with halves rounding up (toward +inf).
/// Used for every float-to-pixel conversion so that results are
/// reproducible across platforms.
inline int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

/// Axis-aligned pixel rectangle. (x, y) is the top-left corner, the
/// rectangle covers columns [x, x+w) and rows [y, y+h).
struct Region {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  long long area() const { return static_cast<long long>(w) * h; }
  int right() const { return x + w; }
  int bottom() const { return y + h; }
  bool empty() const { return w <= 0 || h <= 0; }
  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }

  bool operator==(const Region&) const = default;
};

/// Rectangle with fractional coordinates, produced by interpolation.
struct RegionF {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  Region rounded() const {
    return Region{round_half_up(x), round_half_up(y), round_half_up(w), round_half_up(h)};
  }
};

/// Overlap area of two rectangles: the product of the clamped extent
/// overlaps along each axis. Zero when the boxes are disjoint.
inline long long overlap_area(const Region& a, const Region& b) {
  const long long ox =
      std::max(0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const long long oy =
      std::max(0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  return ox * oy;
}

/// Smallest rectangle containing both inputs.
inline Region union_bbox(const Region& a, const Region& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  const int x1 = std::max(a.right(), b.right());
  const int y1 = std::max(a.bottom(), b.bottom());
  return Region{x0, y0, x1 - x0, y1 - y0};
}

/// Intersection rectangle; empty (w=h=0) when disjoint.
inline Region intersect(const Region& a, const Region& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return Region{};
  return Region{x0, y0, x1 - x0, y1 - y0};
}

/// Intersection over union of two rectangles, in [0, 1].
inline double iou(const Region& a, const Region& b) {
  const long long inter = overlap_area(a, b);
  if (inter == 0) return 0.0;
  const long long uni = a.area() + b.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Deterministic ordering used wherever rectangles must be processed in
/// a reproducible sequence: by x, then y, then w, then h.
inline bool region_less(const Region& a, const Region& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  if (a.w != b.w) return a.w < b.w;
  return a.h < b.h;
}

}  // namespace evtrack
