#include "evtrack/pipeline.hpp"

#include <algorithm>
#include <map>

#include "evtrack/regionprop.hpp"

namespace evtrack {

namespace {

// Documented frame-formation cost model, in abstract ops per frame:
// one threshold pass, the 3x3 median (9 reads + majority per pixel),
// both histogram projections, and the proposal scan. Event binning costs
// 2 ops per event. These tallies make pipeline runs comparable without
// timing noise.
unsigned long long frame_formation_ops(const SensorGeometry& sensor, bool median) {
  const unsigned long long px = static_cast<unsigned long long>(sensor.width) * sensor.height;
  return px * (median ? 14 : 4);
}

TrackRecord to_record(const Track& t, std::uint64_t t_us) {
  TrackRecord r;
  r.t_us = t_us;
  r.id = t.id;
  r.x = t.region.x;
  r.y = t.region.y;
  r.w = t.region.w;
  r.h = t.region.h;
  r.vx = t.vx;
  r.vy = t.vy;
  r.state = to_string(t.state);
  return r;
}

}  // namespace

PipelineResult run_overlap_pipeline(std::span<const Event> events, const PipelineConfig& cfg,
                                    const FrameObserver& observer) {
  TrackerConfig trk = cfg.trk;
  ArithModel arith = make_arith_model(cfg.fx);
  if (cfg.fx.enabled) trk.alpha = snap_alpha(trk.alpha);

  OverlapTracker tracker(trk, cfg.sensor, arith);
  PipelineResult result;
  result.resources.label = cfg.fx.enabled ? "overlap-fixed" : "overlap";
  result.resources.events = events.size();

  const std::vector<BinaryFrame> frames = aggregate_frames(
      std::vector<Event>(events.begin(), events.end()), cfg.frame.period_us, cfg.sensor,
      cfg.frame.min_count);

  unsigned long long image_ops = 0;
  for (const BinaryFrame& frame : frames) {
    const BinaryFrame working = cfg.rp.median_filter ? median_filter_3x3(frame) : frame;
    const std::vector<Region> proposals = propose_regions(working, cfg.rp);
    image_ops += frame_formation_ops(cfg.sensor, cfg.rp.median_filter);

    const std::vector<Track> locked = tracker.step(proposals, frame.t_end_us);
    const std::size_t first = result.records.size();
    for (const Track& t : locked) result.records.push_back(to_record(t, frame.t_end_us));

    if (observer)
      observer(working, proposals,
               std::span<const TrackRecord>(result.records).subspan(first));
  }

  result.resources.frames = frames.size();
  result.resources.ops = tracker.ops() + image_ops + 2 * events.size();
  result.resources.state_bytes = tracker.state_bytes();
  return result;
}

PipelineResult run_ebms_pipeline(std::span<const Event> events, const PipelineConfig& cfg) {
  EbmsTracker tracker(cfg.ebms, cfg.sensor);
  PipelineResult result;
  result.resources.label = "ebms";
  result.resources.events = events.size();
  if (events.empty()) {
    result.resources.state_bytes = tracker.state_bytes();
    return result;
  }

  const std::uint64_t period = cfg.frame.period_us;
  const std::uint64_t t0 = events.front().t_us / period * period;
  std::uint64_t next_boundary = t0 + period;
  unsigned long long frames = 0;

  const auto sample = [&](std::uint64_t t) {
    for (const auto& [id, region] : tracker.visible_tracks(t)) {
      TrackRecord r;
      r.t_us = t;
      r.id = id;
      r.x = region.x;
      r.y = region.y;
      r.w = region.w;
      r.h = region.h;
      r.state = "Locked";
      result.records.push_back(std::move(r));
    }
    ++frames;
  };

  for (const Event& e : events) {
    while (e.t_us >= next_boundary) {
      sample(next_boundary);
      next_boundary += period;
    }
    tracker.process_event(e);
  }
  sample(next_boundary);  // boundary closing the frame of the last event

  result.resources.frames = frames;
  result.resources.ops = tracker.ops();
  result.resources.state_bytes = tracker.state_bytes();
  return result;
}

ExportResult export_crops(std::span<const Event> events, std::span<const TrackRecord> records,
                          const PipelineConfig& cfg) {
  const std::vector<BinaryFrame> frames = aggregate_frames(
      std::vector<Event>(events.begin(), events.end()), cfg.frame.period_us, cfg.sensor,
      cfg.frame.min_count);

  std::map<std::uint64_t, std::size_t> frame_at;  // t_end_us -> frame index
  for (std::size_t i = 0; i < frames.size(); ++i) frame_at[frames[i].t_end_us] = i;

  std::map<std::uint64_t, std::vector<const TrackRecord*>> by_time;
  for (const TrackRecord& r : records) {
    if (r.state != "Locked") continue;
    if (!frame_at.contains(r.t_us))
      throw BoundsError("track record at t=" + std::to_string(r.t_us) +
                        " matches no frame boundary of the event stream");
    by_time[r.t_us].push_back(&r);
  }

  const Region sensor_box{0, 0, cfg.sensor.width, cfg.sensor.height};
  ExportResult out;
  SlotSchedule schedule;

  for (const auto& [t_us, frame_records] : by_time) {
    const std::size_t fi = frame_at.at(t_us);
    const BinaryFrame working =
        cfg.rp.median_filter ? median_filter_3x3(frames[fi]) : frames[fi];

    std::vector<std::uint64_t> ids;
    for (const TrackRecord* r : frame_records) ids.push_back(r->id);
    std::sort(ids.begin(), ids.end());
    schedule.update(ids);

    ExportResult::FrameSchedule fs;
    fs.frame_index = fi;
    fs.t_us = t_us;
    for (int s = 0; s < SlotSchedule::kSlots; ++s) fs.slot_ids.push_back(0);
    for (std::uint64_t id : ids)
      if (const auto slot = schedule.slot_of(id)) fs.slot_ids[*slot] = id;
    fs.unscheduled = schedule.unscheduled();
    out.schedule.push_back(std::move(fs));

    for (const TrackRecord* r : frame_records) {
      if (!schedule.slot_of(r->id)) continue;  // waiting for a classifier slot
      const Region visible = intersect(r->region(), sensor_box);
      if (visible.empty()) continue;

      ExportedCrop crop;
      crop.track_id = r->id;
      crop.frame_index = fi;
      crop.t_us = t_us;
      crop.image = resize_to_fixed(crop_track(working, visible), cfg.exp.size);
      crop.spikes = encode_spikes(crop.image);
      out.crops.push_back(std::move(crop));
    }
  }
  return out;
}

}  // namespace evtrack
