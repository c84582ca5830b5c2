#pragma once

#include <functional>
#include <span>
#include <vector>

#include "evtrack/classify_export.hpp"
#include "evtrack/config.hpp"
#include "evtrack/ebms.hpp"
#include "evtrack/eval.hpp"
#include "evtrack/event_io.hpp"
#include "evtrack/records.hpp"
#include "evtrack/resource.hpp"
#include "evtrack/tracker.hpp"

namespace evtrack {

struct PipelineResult {
  std::vector<TrackRecord> records;
  ResourceReport resources;
};

/// Called once per frame with the filtered frame, its proposals and the
/// records emitted for it.
using FrameObserver = std::function<void(const BinaryFrame& frame,
                                         std::span<const Region> proposals,
                                         std::span<const TrackRecord> records)>;

/// Frame-driven pipeline: aggregate -> median filter -> proposals ->
/// overlap tracker. Emits one record per Locked track per frame.
/// The resource report includes the per-frame image-processing cost
/// (binning, filter, histograms, run extraction) on top of the tracker's
/// own operation count.
PipelineResult run_overlap_pipeline(std::span<const Event> events, const PipelineConfig& cfg,
                                    const FrameObserver& observer = {});

/// Event-driven baseline: every event updates the mean-shift tracker;
/// visible clusters are sampled at the same frame boundaries the
/// frame-driven pipeline uses, so both outputs are comparable.
PipelineResult run_ebms_pipeline(std::span<const Event> events, const PipelineConfig& cfg);

/// Crop export for downstream classification. For every Locked record
/// whose timestamp matches a frame boundary: crop the track region out
/// of the filtered frame, resize to exp.size, and hand the results to
/// the caller via flat tables (written to disk by the CLI).
struct ExportedCrop {
  std::uint64_t track_id = 0;
  std::uint64_t frame_index = 0;
  std::uint64_t t_us = 0;
  BitImage image;
  std::vector<Spike> spikes;
};

struct ExportResult {
  std::vector<ExportedCrop> crops;
  /// Per frame: (frame_index, t_us, schedule) where schedule maps slot
  /// index -> track id (0 = idle slot).
  struct FrameSchedule {
    std::uint64_t frame_index = 0;
    std::uint64_t t_us = 0;
    std::vector<std::uint64_t> slot_ids;
    std::vector<std::uint64_t> unscheduled;
  };
  std::vector<FrameSchedule> schedule;
};

ExportResult export_crops(std::span<const Event> events, std::span<const TrackRecord> records,
                          const PipelineConfig& cfg);

}  // namespace evtrack
