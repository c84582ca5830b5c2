#include "evtrack/regionprop.hpp"

#include <algorithm>

namespace evtrack {

BinaryFrame median_filter_3x3(const BinaryFrame& frame) {
  BinaryFrame out(frame.width, frame.height);
  out.index = frame.index;
  out.t_start_us = frame.t_start_us;
  out.t_end_us = frame.t_end_us;

  const int w = frame.width, h = frame.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int set = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;  // outside counts as 0
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx;
          if (xx < 0 || xx >= w) continue;
          set += frame.bits[static_cast<std::size_t>(yy) * w + xx] != 0;
        }
      }
      // median of 9 binary samples = majority (>= 5 set)
      out.bits[static_cast<std::size_t>(y) * w + x] = set >= 5;
    }
  }
  return out;
}

Histograms project_histograms(const BinaryFrame& frame) {
  std::vector<int> hx(frame.width, 0), hy(frame.height, 0);
  for (int y = 0; y < frame.height; ++y) {
    const std::uint8_t* row = frame.bits.data() + static_cast<std::size_t>(y) * frame.width;
    for (int x = 0; x < frame.width; ++x) {
      if (row[x]) {
        ++hx[x];
        ++hy[y];
      }
    }
  }
  return {std::move(hx), std::move(hy)};
}

std::vector<Run> extract_runs(const std::vector<int>& histogram, int density_threshold,
                              int min_run, int max_gap) {
  // raw maximal runs of active bins
  std::vector<Run> runs;
  const int n = static_cast<int>(histogram.size());
  int start = -1;
  for (int i = 0; i <= n; ++i) {
    const bool active = i < n && histogram[i] > density_threshold;
    if (active && start < 0) start = i;
    if (!active && start >= 0) {
      runs.push_back(Run{start, i});
      start = -1;
    }
  }

  // bridge gaps of at most max_gap inactive bins, then drop short runs
  std::vector<Run> merged;
  for (const Run& r : runs) {
    if (!merged.empty() && r.begin - merged.back().end <= max_gap)
      merged.back().end = r.end;
    else
      merged.push_back(r);
  }
  std::erase_if(merged, [&](const Run& r) { return r.length() < min_run; });
  return merged;
}

std::vector<Region> propose_regions(const BinaryFrame& frame, const RegionPropConfig& cfg) {
  const auto [hx, hy] = project_histograms(frame);
  const std::vector<Run> xruns = extract_runs(hx, cfg.density_threshold, cfg.min_run, cfg.max_gap);
  const std::vector<Run> yruns = extract_runs(hy, cfg.density_threshold, cfg.min_run, cfg.max_gap);

  std::vector<Region> proposals;
  for (const Run& ry : yruns) {
    for (const Run& rx : xruns) {
      const Region cand{rx.begin, ry.begin, rx.length(), ry.length()};
      if (cand.area() < cfg.min_area) continue;

      // count content and find its bounding box in one pass
      long long active = 0;
      int x0 = cand.right(), x1 = cand.x - 1, y0 = cand.bottom(), y1 = cand.y - 1;
      for (int y = cand.y; y < cand.bottom(); ++y) {
        const std::uint8_t* row = frame.bits.data() + static_cast<std::size_t>(y) * frame.width;
        for (int x = cand.x; x < cand.right(); ++x) {
          if (!row[x]) continue;
          ++active;
          x0 = std::min(x0, x);
          x1 = std::max(x1, x);
          y0 = std::min(y0, y);
          y1 = std::max(y1, y);
        }
      }
      if (active == 0) continue;
      if (static_cast<double>(active) / static_cast<double>(cand.area()) < cfg.min_fill) continue;

      proposals.push_back(Region{x0, y0, x1 - x0 + 1, y1 - y0 + 1});
    }
  }

  std::sort(proposals.begin(), proposals.end(), region_less);
  return proposals;
}

}  // namespace evtrack
