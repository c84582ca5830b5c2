#pragma once

#include <utility>
#include <vector>

#include "evtrack/events.hpp"
#include "evtrack/geometry.hpp"

namespace evtrack {

/// Region-proposal parameters. Defaults are tuned for a 240x180 sensor
/// with 33 ms frames.
struct RegionPropConfig {
  int density_threshold = 1;  ///< histogram bins must exceed this to count as active
  int min_run = 3;            ///< shortest surviving run, in pixels
  int max_gap = 2;            ///< inactive gap (pixels) bridged between runs
  double min_fill = 0.10;     ///< minimum active-pixel fraction of a candidate
  int min_area = 9;           ///< minimum candidate area in pixels
  bool median_filter = true;  ///< apply the 3x3 filter before proposing
};

/// 3x3 median filter for binary images: an output pixel is set when at
/// least 5 of the 9 pixels in its neighborhood are set. Pixels outside
/// the frame count as zero, so 1-pixel specks and thin diagonals vanish.
BinaryFrame median_filter_3x3(const BinaryFrame& frame);

/// Column (x) and row (y) activity histograms: counts of set pixels per
/// column and per row.
struct Histograms {
  std::vector<int> x;
  std::vector<int> y;
};

Histograms project_histograms(const BinaryFrame& frame);

/// Half-open index interval [begin, end) of consecutive active bins.
struct Run {
  int begin = 0;
  int end = 0;

  int length() const { return end - begin; }
  bool operator==(const Run&) const = default;
};

/// Extract active runs from a histogram. A bin is active when its count
/// exceeds `density_threshold` (strict). Runs separated by at most
/// `max_gap` inactive bins are merged first; merged runs shorter than
/// `min_run` are then dropped. Returned in ascending order.
std::vector<Run> extract_runs(const std::vector<int>& histogram, int density_threshold,
                              int min_run, int max_gap);

/// Propose object regions for one filtered frame. Candidates are the
/// cross products of x-runs and y-runs; a candidate survives when it
/// contains at least one active pixel, its fill ratio (active / area)
/// is at least `min_fill`, and its area is at least `min_area`.
/// Surviving candidates are tightened to the bounding box of their
/// active content and returned sorted by (x, y, w, h).
std::vector<Region> propose_regions(const BinaryFrame& frame, const RegionPropConfig& cfg);

}  // namespace evtrack
