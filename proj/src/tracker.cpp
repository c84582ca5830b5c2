#include "evtrack/tracker.hpp"

#include <algorithm>
#include <cmath>

namespace evtrack {

namespace {

int clamp_coord(int v, int lo, int hi) { return std::max(lo, std::min(v, hi)); }

double axis_velocity(const Track& t, int axis) { return axis == 0 ? t.vx : t.vy; }

int axis_extent(const Region& r, int axis) { return axis == 0 ? r.w : r.h; }

}  // namespace

std::string to_string(TrackState s) {
  switch (s) {
    case TrackState::Free: return "Free";
    case TrackState::Tracking: return "Tracking";
    case TrackState::Locked: return "Locked";
  }
  return "Free";
}

TrackState track_state_from_string(const std::string& s) {
  if (s == "Free") return TrackState::Free;
  if (s == "Tracking") return TrackState::Tracking;
  if (s == "Locked") return TrackState::Locked;
  throw ParseError("unknown track state '" + s + "'");
}

double assignment_ratio(const Region& proposal, const Region& predicted) {
  if (proposal.empty() || predicted.empty()) return 0.0;
  const long long inter = overlap_area(proposal, predicted);
  if (inter == 0) return 0.0;
  const long long smaller = std::min(proposal.area(), predicted.area());
  return static_cast<double>(inter) / static_cast<double>(smaller);
}

Region predict(const Track& track, double dt, const SensorGeometry& sensor,
               const ArithModel& arith) {
  if (track.state == TrackState::Free) throw StateError("predict() on a Free track");
  const int nx = round_half_up(arith.pos(track.region.x + arith.vel(track.vx * dt)));
  const int ny = round_half_up(arith.pos(track.region.y + arith.vel(track.vy * dt)));
  Region r{nx, ny, track.region.w, track.region.h};
  r.x = clamp_coord(r.x, 0, std::max(0, sensor.width - r.w));
  r.y = clamp_coord(r.y, 0, std::max(0, sensor.height - r.h));
  return r;
}

namespace {

// One coordinate of the weighted region update.
double blend_coord(double proposal_c, double prev_c, double v, double alpha, double dt,
                   const ArithModel& am) {
  const double predicted = am.pos(prev_c + am.vel(v * dt));
  return am.pos(am.pos((1.0 - alpha) * proposal_c) + am.pos(alpha * predicted));
}

}  // namespace

Region weighted_update(const Region& proposal, const Region& previous, double vx, double vy,
                       double alpha, double dt, const ArithModel& arith) {
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0,1]");
  Region out;
  out.x = round_half_up(blend_coord(proposal.x, previous.x, vx, alpha, dt, arith));
  out.y = round_half_up(blend_coord(proposal.y, previous.y, vy, alpha, dt, arith));
  // extents carry no velocity; their prediction is the previous value
  out.w = round_half_up(blend_coord(proposal.w, previous.w, 0.0, alpha, dt, arith));
  out.h = round_half_up(blend_coord(proposal.h, previous.h, 0.0, alpha, dt, arith));
  return out;
}

std::pair<double, double> velocity_update(const Region& proposal, const Region& previous,
                                          double vx, double vy, double alpha, double dt,
                                          const ArithModel& arith) {
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0,1]");
  if (dt <= 0.0) throw StateError("velocity update needs a positive time step");

  const auto update_axis = [&](int prop_c, int prev_c, int prop_e, int prev_e, double v) {
    const double inst =
        arith.vel(((prop_c - prev_c) + (prop_e - prev_e)) / dt);
    return arith.vel(arith.vel((1.0 - alpha) * inst) + arith.vel(alpha * v));
  };
  return {update_axis(proposal.x, previous.x, proposal.w, previous.w, vx),
          update_axis(proposal.y, previous.y, proposal.h, previous.h, vy)};
}

Region merge_proposals(std::span<const Region> proposals, const Region& current) {
  Region merged = current;
  for (const Region& p : proposals) merged = union_bbox(merged, p);
  return merged;
}

OcclusionFlags occlusion_flags(const Track& a, const Track& b, const Region& proposal,
                               const Region& prev_merged) {
  OcclusionFlags f;

  // dominant axis: the larger velocity component of the faster track
  const double speed_a = std::hypot(a.vx, a.vy);
  const double speed_b = std::hypot(b.vx, b.vy);
  const Track& faster = speed_b > speed_a ? b : a;
  f.axis = std::abs(faster.vy) > std::abs(faster.vx) ? 1 : 0;

  const double va = axis_velocity(a, f.axis);
  const double vb = axis_velocity(b, f.axis);
  f.common_direction = va * vb >= 0.0;
  f.width_increased = axis_extent(proposal, f.axis) > axis_extent(prev_merged, f.axis);
  f.higher_velocity = std::abs(va) > std::abs(vb);
  return f;
}

std::pair<Region, Region> resolve_occlusion(const Track& a, const Track& b,
                                            const Region& proposal,
                                            const OcclusionFlags& flags) {
  if (!a.pre_occlusion_size || !b.pre_occlusion_size)
    throw StateError("resolve_occlusion() without recorded pre-occlusion sizes");

  const auto [wa, ha] = *a.pre_occlusion_size;
  const auto [wb, hb] = *b.pre_occlusion_size;
  const auto near_corner = [&](int w, int h) { return Region{proposal.x, proposal.y, w, h}; };
  const auto far_corner = [&](int w, int h) {
    return Region{proposal.x + proposal.w - w, proposal.y + proposal.h - h, w, h};
  };

  if (!flags.width_increased) return {proposal, proposal};  // fully merged
  if (!flags.common_direction || flags.higher_velocity)
    return {far_corner(wa, ha), near_corner(wb, hb)};  // a leads the merged blob
  return {near_corner(wa, ha), far_corner(wb, hb)};    // b leads
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> detect_occlusion(
    std::span<const Track> tracks, const TrackerConfig& cfg, double dt,
    const SensorGeometry& sensor, const ArithModel& arith) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  if (dt <= 0.0) return out;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (tracks[i].state == TrackState::Free) continue;
    for (std::size_t j = i + 1; j < tracks.size(); ++j) {
      if (tracks[j].state == TrackState::Free) continue;
      for (int n = 1; n <= cfg.occlusion_horizon; ++n) {
        const Region pi = predict(tracks[i], n * dt, sensor, arith);
        const Region pj = predict(tracks[j], n * dt, sensor, arith);
        if (overlap_area(pi, pj) > 0) {
          auto pair = std::minmax(tracks[i].id, tracks[j].id);
          out.emplace_back(pair.first, pair.second);
          break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void TrackHistory::append(std::uint64_t id, std::uint64_t t_us, const Region& region) {
  auto& samples = tracks_[id];
  if (!samples.empty() && t_us <= samples.back().t_us)
    throw OrderingError("history samples must be strictly increasing in time");
  samples.push_back(Sample{t_us, region});
}

RegionF TrackHistory::interpolate(std::uint64_t id, std::uint64_t t_us) const {
  const auto it = tracks_.find(id);
  if (it == tracks_.end()) throw BoundsError("unknown track id " + std::to_string(id));
  const auto& samples = it->second;

  if (t_us < samples.front().t_us || t_us > samples.back().t_us)
    throw OrderingError("time " + std::to_string(t_us) + " outside track " + std::to_string(id) +
                        " span [" + std::to_string(samples.front().t_us) + "," +
                        std::to_string(samples.back().t_us) + "]");

  const auto next = std::lower_bound(
      samples.begin(), samples.end(), t_us,
      [](const Sample& s, std::uint64_t t) { return s.t_us < t; });
  if (next->t_us == t_us) {
    const Region& r = next->region;
    return RegionF{static_cast<double>(r.x), static_cast<double>(r.y), static_cast<double>(r.w),
                   static_cast<double>(r.h)};
  }

  const Sample& s0 = *(next - 1);
  const Sample& s1 = *next;
  const double lambda =
      static_cast<double>(t_us - s0.t_us) / static_cast<double>(s1.t_us - s0.t_us);
  const auto lerp = [&](int a, int b) { return a + lambda * (b - a); };
  return RegionF{lerp(s0.region.x, s1.region.x), lerp(s0.region.y, s1.region.y),
                 lerp(s0.region.w, s1.region.w), lerp(s0.region.h, s1.region.h)};
}

const std::vector<TrackHistory::Sample>* TrackHistory::samples(std::uint64_t id) const {
  const auto it = tracks_.find(id);
  return it == tracks_.end() ? nullptr : &it->second;
}

std::vector<std::uint64_t> TrackHistory::ids() const {
  std::vector<std::uint64_t> out;
  out.reserve(tracks_.size());
  for (const auto& [id, _] : tracks_) out.push_back(id);
  return out;
}

OverlapTracker::OverlapTracker(const TrackerConfig& cfg, const SensorGeometry& sensor,
                               const ArithModel& arith)
    : cfg_(cfg), sensor_(sensor), arith_(arith), slots_(cfg.max_tracks) {
  if (cfg.max_tracks < 1) throw ConfigError("trk.max_tracks must be >= 1");
  if (cfg.max_unlocks < 1) throw ConfigError("trk.max_unlocks must be >= 1");
  if (cfg.alpha < 0.0 || cfg.alpha > 1.0) throw ConfigError("trk.alpha must be in [0,1]");
  if (cfg.overlap_ratio_threshold < 0.0 || cfg.overlap_ratio_threshold > 1.0)
    throw ConfigError("trk.overlap_ratio_threshold must be in [0,1]");
}

void OverlapTracker::flag_pair(int ia, int ib) {
  const PairKey key{std::min(ia, ib), std::max(ia, ib)};
  if (pairs_.contains(key)) return;
  pairs_[key] = PairState{union_bbox(slots_[ia].region, slots_[ib].region)};
  peak_pairs_ = std::max(peak_pairs_, pairs_.size());
  for (int k : {ia, ib}) {
    Track& t = slots_[k];
    if (!t.pre_occlusion_size) t.pre_occlusion_size = std::make_pair(t.region.w, t.region.h);
  }
}

void OverlapTracker::free_slot(int k) {
  slots_[k] = Track{};  // back to Free with all fields cleared
  for (auto it = pairs_.begin(); it != pairs_.end();) {
    if (it->first.a == k || it->first.b == k)
      it = pairs_.erase(it);
    else
      ++it;
  }
}

Region OverlapTracker::coast(const Track& t, double dt) const {
  // unclamped drift so that a departing track can actually leave the frame
  const int nx = round_half_up(arith_.pos(t.region.x + arith_.vel(t.vx * dt)));
  const int ny = round_half_up(arith_.pos(t.region.y + arith_.vel(t.vy * dt)));
  return Region{nx, ny, t.region.w, t.region.h};
}

std::vector<Track> OverlapTracker::step(std::span<const Region> proposals, std::uint64_t t_us) {
  if (started_ && t_us <= last_t_us_)
    throw OrderingError("step time " + std::to_string(t_us) + " not after " +
                        std::to_string(last_t_us_));
  const double dt = started_ ? static_cast<double>(t_us - last_t_us_) * 1e-6 : 0.0;
  const int n_slots = static_cast<int>(slots_.size());

  std::vector<int> active;
  for (int k = 0; k < n_slots; ++k)
    if (slots_[k].state != TrackState::Free) active.push_back(k);

  // --- predictions for assignment
  std::vector<Region> predicted(n_slots);
  for (int k : active) {
    predicted[k] = dt > 0.0 ? predict(slots_[k], dt, sensor_, arith_) : slots_[k].region;
    ops_ += 6;
  }

  // --- predicted-overlap occlusion scan
  std::vector<PairKey> overlapping_now;
  if (dt > 0.0) {
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const int ka = active[i], kb = active[j];
        for (int n = 1; n <= cfg_.occlusion_horizon; ++n) {
          ops_ += 20;
          if (overlap_area(predict(slots_[ka], n * dt, sensor_, arith_),
                           predict(slots_[kb], n * dt, sensor_, arith_)) > 0) {
            overlapping_now.push_back(PairKey{ka, kb});
            flag_pair(ka, kb);
            break;
          }
        }
      }
    }
  }

  // --- proposal-to-track assignment by overlap ratio
  std::vector<std::vector<int>> track_props(n_slots);
  std::vector<std::vector<int>> prop_tracks(proposals.size());
  for (int k : active) {
    for (std::size_t p = 0; p < proposals.size(); ++p) {
      ops_ += 10;
      if (assignment_ratio(proposals[p], predicted[k]) > cfg_.overlap_ratio_threshold) {
        track_props[k].push_back(static_cast<int>(p));
        prop_tracks[p].push_back(k);
      }
    }
  }

  // --- effective region per matched track (fragment merging)
  std::vector<std::optional<Region>> effective(n_slots);
  for (int k : active) {
    if (track_props[k].empty()) continue;
    if (track_props[k].size() == 1) {
      effective[k] = proposals[track_props[k][0]];
    } else {
      Region merged = slots_[k].region;
      for (int p : track_props[k]) merged = union_bbox(merged, proposals[p]);
      effective[k] = merged;
      ops_ += 4 * track_props[k].size();
    }
  }

  // --- shared proposals: resolve occlusions pairwise
  std::vector<PairKey> shared_now;
  std::vector<char> resolved(n_slots, 0);
  for (std::size_t p = 0; p < proposals.size(); ++p) {
    if (prop_tracks[p].size() < 2) continue;
    int a = -1, b = -1;
    for (int k : prop_tracks[p]) {  // ascending slot order
      if (resolved[k]) continue;
      if (a < 0)
        a = k;
      else if (b < 0) {
        b = k;
        break;
      }
    }
    if (b < 0) continue;  // fewer than two unresolved sharers; they keep the full proposal

    flag_pair(a, b);
    const PairKey key{a, b};
    const OcclusionFlags flags =
        occlusion_flags(slots_[a], slots_[b], proposals[p], pairs_[key].prev_merged);
    const auto [ra, rb] = resolve_occlusion(slots_[a], slots_[b], proposals[p], flags);
    effective[a] = ra;
    effective[b] = rb;
    resolved[a] = resolved[b] = 1;
    pairs_[key].prev_merged = proposals[p];
    shared_now.push_back(key);
    ops_ += 16;
  }

  // --- weighted update of matched tracks (velocity first, from the old state)
  std::vector<char> matched(n_slots, 0);
  for (int k : active) {
    if (!effective[k]) continue;
    Track& t = slots_[k];
    const auto [nvx, nvy] =
        velocity_update(*effective[k], t.region, t.vx, t.vy, cfg_.alpha, dt, arith_);
    const Region nr = weighted_update(*effective[k], t.region, t.vx, t.vy, cfg_.alpha, dt, arith_);
    ops_ += 24;

    if (t.state == TrackState::Tracking && t.last_update_frame + 1 == frame_index_ &&
        frame_index_ > 0)
      t.state = TrackState::Locked;  // second consecutive match
    t.region = nr;
    t.vx = nvx;
    t.vy = nvy;
    t.miss_count = 0;
    t.last_update_frame = frame_index_;
    t.last_update_t_us = t_us;
    matched[k] = 1;
  }

  // --- births: unmatched proposals into free slots, deterministic order
  std::vector<Region> births;
  for (std::size_t p = 0; p < proposals.size(); ++p)
    if (prop_tracks[p].empty()) births.push_back(proposals[p]);
  std::sort(births.begin(), births.end(), region_less);
  std::size_t next_birth = 0;
  for (int k = 0; k < n_slots && next_birth < births.size(); ++k) {
    if (slots_[k].state != TrackState::Free) continue;
    Track& t = slots_[k];
    t = Track{};
    t.id = next_id_++;
    t.region = births[next_birth++];
    t.state = TrackState::Tracking;
    t.last_update_frame = frame_index_;
    t.last_update_t_us = t_us;
  }
  // proposals beyond the slot pool are dropped

  // --- misses: count, coast, free after max_unlocks
  for (int k : active) {
    if (matched[k]) continue;
    Track& t = slots_[k];
    ++t.miss_count;
    if (t.miss_count >= cfg_.max_unlocks) {
      free_slot(k);
    } else if (dt > 0.0) {
      t.region = coast(t, dt);
      ops_ += 4;
    }
  }

  // --- release tracks whose center left the sensor
  for (int k = 0; k < n_slots; ++k) {
    Track& t = slots_[k];
    if (t.state == TrackState::Free) continue;
    const double cx = t.region.center_x();
    const double cy = t.region.center_y();
    if (cx < 0.0 || cx >= sensor_.width || cy < 0.0 || cy >= sensor_.height) free_slot(k);
  }

  // --- occlusion bookkeeping: a pair stays flagged only while the tracks
  //     still overlap in prediction or still share a proposal
  const auto is_current = [&](const PairKey& key) {
    return std::find(overlapping_now.begin(), overlapping_now.end(), key) !=
               overlapping_now.end() ||
           std::find(shared_now.begin(), shared_now.end(), key) != shared_now.end();
  };
  for (auto it = pairs_.begin(); it != pairs_.end();) {
    const bool both_active = slots_[it->first.a].state != TrackState::Free &&
                             slots_[it->first.b].state != TrackState::Free;
    if (!both_active || !is_current(it->first)) {
      it = pairs_.erase(it);
      continue;
    }
    // refresh the reference box for pairs that did not merge this frame
    if (std::find(shared_now.begin(), shared_now.end(), it->first) == shared_now.end())
      it->second.prev_merged =
          union_bbox(slots_[it->first.a].region, slots_[it->first.b].region);
    ++it;
  }
  for (int k = 0; k < n_slots; ++k) {
    if (slots_[k].state == TrackState::Free) continue;
    bool in_pair = false;
    for (const auto& [key, _] : pairs_)
      if (key.a == k || key.b == k) in_pair = true;
    if (!in_pair) slots_[k].pre_occlusion_size.reset();
  }

  // --- report and record locked tracks
  std::vector<Track> out;
  for (const Track& t : slots_)
    if (t.state == TrackState::Locked) out.push_back(t);
  std::sort(out.begin(), out.end(), [](const Track& a, const Track& b) { return a.id < b.id; });
  for (const Track& t : out) history_.append(t.id, t_us, t.region);

  started_ = true;
  last_t_us_ = t_us;
  ++frame_index_;
  return out;
}

std::size_t OverlapTracker::state_bytes() const {
  return sizeof(*this) + slots_.capacity() * sizeof(Track) +
         peak_pairs_ * (sizeof(PairKey) + sizeof(PairState));
}

}  // namespace evtrack
