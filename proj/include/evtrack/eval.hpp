#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evtrack/events.hpp"
#include "evtrack/geometry.hpp"
#include "evtrack/records.hpp"
#include "evtrack/resource.hpp"
#include "evtrack/synth.hpp"

namespace evtrack {

/// Reported boxes and ground-truth boxes sharing one timestamp.
struct FrameBoxes {
  std::uint64_t t_us = 0;
  std::vector<Region> tracks;
  std::vector<Region> gts;
};

/// Greedy one-to-one matching of one frame: candidate pairs with
/// IoU >= iou_thr are taken in descending IoU order (ties by track
/// index, then ground-truth index), each box used at most once.
struct FrameMatch {
  std::vector<std::pair<int, int>> pairs;  // (track index, gt index)
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  double matched_iou_sum = 0.0;
};

FrameMatch match_frame(std::span<const Region> tracks, std::span<const Region> gts,
                       double iou_thr);

/// One operating point of the precision/recall sweep. The convention for
/// empty sides: precision = 1.0 when nothing was reported, recall = 1.0
/// when there was nothing to find (no false claims were made).
struct CurvePoint {
  double iou_thr = 0.0;
  double precision = 1.0;
  double recall = 1.0;
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  double mean_matched_iou = 0.0;
};

std::vector<CurvePoint> pr_sweep(std::span<const FrameBoxes> frames,
                                 std::span<const double> thresholds);

/// Pair reported tracks with ground truth per timestamp. With
/// `interpolate` false, records and ground truth are grouped by exact
/// t_us (union of both time sets). With `interpolate` true, evaluation
/// runs at the ground-truth timestamps and each track contributes its
/// linearly interpolated box wherever its recorded samples span that
/// time; this lines up streams whose frame phases differ.
std::vector<FrameBoxes> pair_frames(std::span<const TrackRecord> records,
                                    std::span<const GroundTruthTrack> ground_truth,
                                    bool interpolate);

/// "start:stop:step" (inclusive endpoints) or a comma-separated list.
std::vector<double> parse_threshold_spec(const std::string& spec);

/// Human-readable metrics report and the equivalent flat key-value text.
std::string metrics_to_text(std::span<const CurvePoint> curve, const ResourceReport* resources);
std::string metrics_to_kv(std::span<const CurvePoint> curve, const ResourceReport* resources);
std::string curve_to_csv(std::span<const CurvePoint> curve);

}  // namespace evtrack
