#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evtrack/events.hpp"
#include "evtrack/geometry.hpp"
#include "evtrack/quant.hpp"

namespace evtrack {

enum class TrackState { Free, Tracking, Locked };

std::string to_string(TrackState s);
TrackState track_state_from_string(const std::string& s);

/// One tracker slot. A Free slot carries no valid data; an occupied slot
/// holds the smoothed region, the velocity estimate in pixels/second and
/// the bookkeeping needed for lock/miss handling and occlusion recovery.
struct Track {
  std::uint64_t id = 0;  ///< stable identifier, never reused after release
  Region region;
  double vx = 0.0;
  double vy = 0.0;
  TrackState state = TrackState::Free;
  int miss_count = 0;  ///< consecutive frames without a matched proposal

  /// (w, h) captured when the track was first flagged as occluded;
  /// present exactly while an occlusion involving this track is active.
  std::optional<std::pair<int, int>> pre_occlusion_size;

  std::uint64_t last_update_frame = 0;
  std::uint64_t last_update_t_us = 0;
};

struct TrackerConfig {
  double alpha = 0.5;                    ///< history weight in the update equations
  double overlap_ratio_threshold = 0.20; ///< assignment needs ratio strictly above this
  int max_tracks = 8;
  int max_unlocks = 3;                   ///< consecutive misses before a slot is freed
  int occlusion_horizon = 2;             ///< frames ahead checked for predicted overlap
};

/// Overlap ratio used for assignment: overlap area divided by the area
/// of the smaller box, in [0, 1]. Zero when either box is empty.
double assignment_ratio(const Region& proposal, const Region& predicted);

/// Advance a track's region by its velocity over `dt` seconds and clamp
/// the result so the box stays inside the sensor. Coordinates are
/// rounded half-up after the shift. StateError on a Free track.
Region predict(const Track& track, double dt, const SensorGeometry& sensor,
               const ArithModel& arith = {});

/// Blend a matched proposal into a track's region:
///
///   T_j = (1 - alpha) * r_new + alpha * (T_{j-1} + v_{j-1} * dt)
///
/// applied per coordinate; the prediction term uses the track velocity
/// for x and y and zero velocity for w and h. Each intermediate passes
/// through `arith` before the final half-up rounding to pixels.
Region weighted_update(const Region& proposal, const Region& previous, double vx, double vy,
                       double alpha, double dt, const ArithModel& arith = {});

/// Update the velocity estimate from consecutive matched regions:
///
///   v_j = (1 - alpha) * ((x_new - x_prev) + (w_new - w_prev)) / dt + alpha * v_{j-1}
///
/// per axis (y/h respectively). The instantaneous term sums the corner
/// displacement and the size change so that growth and motion both
/// register. dt must be positive (StateError otherwise).
std::pair<double, double> velocity_update(const Region& proposal, const Region& previous,
                                          double vx, double vy, double alpha, double dt,
                                          const ArithModel& arith = {});

/// Union bounding box of several proposals assigned to one track plus
/// the track's current region. Used when an object fragments into
/// multiple proposals.
Region merge_proposals(std::span<const Region> proposals, const Region& current);

/// Occlusion tests evaluated when two tracks share one proposal:
///   common_direction: velocity signs agree on the dominant axis,
///   width_increased:  the shared proposal grew past the previous merged box,
///   higher_velocity:  track a is faster than track b on the dominant axis.
/// The dominant axis is the axis of the larger velocity component of the
/// faster track.
struct OcclusionFlags {
  bool common_direction = false;
  bool width_increased = false;
  bool higher_velocity = false;
  int axis = 0;  ///< 0 = x, 1 = y
};

OcclusionFlags occlusion_flags(const Track& a, const Track& b, const Region& proposal,
                               const Region& prev_merged);

/// Split a shared proposal between two occluded tracks using their
/// pre-occlusion sizes (StateError when missing):
///   - no size increase: tracks are fully merged, both keep the proposal;
///   - grown and (opposing directions or a is faster): a leads and takes
///     the far corner of the proposal at its pre-occlusion size, b takes
///     the near corner at its own;
///   - grown, same direction, b at least as fast: the roles swap.
std::pair<Region, Region> resolve_occlusion(const Track& a, const Track& b,
                                            const Region& proposal,
                                            const OcclusionFlags& flags);

/// Predicted-overlap occlusion scan: all pairs of occupied tracks whose
/// clamped predictions intersect within the next `occlusion_horizon`
/// frames of length `dt`. Returns pairs of track ids, lower id first.
std::vector<std::pair<std::uint64_t, std::uint64_t>> detect_occlusion(
    std::span<const Track> tracks, const TrackerConfig& cfg, double dt,
    const SensorGeometry& sensor, const ArithModel& arith = {});

/// Timestamped region samples per track id, recorded while Locked.
/// Supports linear interpolation between samples for evaluation against
/// ground truth that is sampled on a different clock.
class TrackHistory {
 public:
  struct Sample {
    std::uint64_t t_us = 0;
    Region region;
  };

  void append(std::uint64_t id, std::uint64_t t_us, const Region& region);

  /// Piecewise-linear interpolation at time t:
  ///   lambda = (t - t_{j-1}) / (t_j - t_{j-1})
  /// applied per coordinate between the samples bracketing t. Exact
  /// sample times return the sample. BoundsError for an unknown id,
  /// OrderingError for t outside [first, last].
  RegionF interpolate(std::uint64_t id, std::uint64_t t_us) const;

  const std::vector<Sample>* samples(std::uint64_t id) const;
  std::vector<std::uint64_t> ids() const;
  bool empty() const { return tracks_.empty(); }

 private:
  std::map<std::uint64_t, std::vector<Sample>> tracks_;
};

/// Frame-driven multi-object tracker over region proposals.
///
/// Each frame: predict occupied slots forward, flag predicted occlusions,
/// assign proposals by overlap ratio, merge fragments / split shared
/// proposals, run the weighted update equations, then handle misses,
/// births and out-of-bounds exits. Slot count is fixed; surplus
/// proposals are dropped once all slots are occupied.
///
/// States: a new track starts Tracking, becomes Locked after matching in
/// two consecutive frames, and only Locked tracks are reported. A slot
/// is freed after `max_unlocks` consecutive misses or when its region
/// center leaves the sensor.
class OverlapTracker {
 public:
  OverlapTracker(const TrackerConfig& cfg, const SensorGeometry& sensor,
                 const ArithModel& arith = {});

  /// Ingest the proposals of one frame at time `t_us` (strictly
  /// increasing across calls) and return snapshots of the Locked tracks,
  /// ordered by id.
  std::vector<Track> step(std::span<const Region> proposals, std::uint64_t t_us);

  const std::vector<Track>& slots() const { return slots_; }
  const TrackHistory& history() const { return history_; }
  std::uint64_t frames_processed() const { return frame_index_; }

  /// Persistent working-state footprint in bytes: the fixed slot pool
  /// plus the peak of the occlusion pair table. History and I/O buffers
  /// are outputs, not tracker state, and are excluded.
  std::size_t state_bytes() const;

  /// Arithmetic operations spent inside step() so far (predictions,
  /// ratio tests, update equations). Grows with frames, not events.
  unsigned long long ops() const { return ops_; }

 private:
  struct PairKey {
    int a = 0;  // slot indices, a < b
    int b = 0;
    auto operator<=>(const PairKey&) const = default;
  };
  struct PairState {
    Region prev_merged;  // merged box of the pair as of the previous frame
  };

  void flag_pair(int ia, int ib);
  void free_slot(int k);
  Region coast(const Track& t, double dt) const;

  TrackerConfig cfg_;
  SensorGeometry sensor_;
  ArithModel arith_;
  std::vector<Track> slots_;
  std::map<PairKey, PairState> pairs_;
  TrackHistory history_;
  std::uint64_t next_id_ = 1;
  std::uint64_t frame_index_ = 0;
  std::uint64_t last_t_us_ = 0;
  bool started_ = false;
  std::size_t peak_pairs_ = 0;
  unsigned long long ops_ = 0;
};

}  // namespace evtrack
