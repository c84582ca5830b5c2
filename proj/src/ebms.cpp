#include "evtrack/ebms.hpp"

#include <algorithm>
#include <cmath>

namespace evtrack {

void EbmsCluster::push_time(std::uint64_t t) {
  if (recent.size() < ring_capacity) {
    recent.push_back(t);
  } else {
    recent[ring_pos] = t;
    ring_pos = (ring_pos + 1) % ring_capacity;
  }
}

std::uint64_t EbmsCluster::oldest_time() const {
  if (recent.empty()) return 0;
  if (recent.size() < ring_capacity) return recent.front();
  return recent[ring_pos];  // next overwrite position holds the oldest entry
}

int EbmsCluster::support(std::uint64_t now, std::uint64_t horizon_us) const {
  const std::uint64_t cutoff = now >= horizon_us ? now - horizon_us : 0;
  int n = 0;
  for (std::uint64_t t : recent) n += t >= cutoff;
  return n;
}

EbmsTracker::EbmsTracker(const EbmsConfig& cfg, const SensorGeometry& sensor)
    : cfg_(cfg), sensor_(sensor) {
  if (cfg.radius <= 0.0) throw ConfigError("ebms.radius must be positive");
  if (cfg.eta <= 0.0 || cfg.eta > 1.0) throw ConfigError("ebms.eta must be in (0,1]");
  if (cfg.support_threshold < 1) throw ConfigError("ebms.support_threshold must be >= 1");
  if (cfg.max_clusters < 1) throw ConfigError("ebms.max_clusters must be >= 1");
  clusters_.reserve(static_cast<std::size_t>(cfg.max_clusters));
}

void EbmsTracker::prune(std::uint64_t t_us) {
  std::erase_if(clusters_, [&](const EbmsCluster& c) {
    ++ops_;
    return t_us - c.last_event_t > cfg_.timeout_us;
  });
}

void EbmsTracker::process_event(const Event& e) {
  if (started_ && e.t_us < last_t_us_)
    throw OrderingError("event at t=" + std::to_string(e.t_us) + " before previous t=" +
                        std::to_string(last_t_us_));
  started_ = true;
  last_t_us_ = e.t_us;
  ++events_;

  prune(e.t_us);

  // nearest centroid within the capture radius; ties keep the earliest cluster
  const double r2 = cfg_.radius * cfg_.radius;
  EbmsCluster* best = nullptr;
  double best_d2 = r2;
  for (EbmsCluster& c : clusters_) {
    const double dx = e.x - c.cx;
    const double dy = e.y - c.cy;
    const double d2 = dx * dx + dy * dy;
    ops_ += 4;
    if (d2 <= best_d2 && (!best || d2 < best_d2)) {
      best = &c;
      best_d2 = d2;
    }
  }

  if (best) {
    best->cx += cfg_.eta * (e.x - best->cx);
    best->cy += cfg_.eta * (e.y - best->cy);
    best->last_event_t = e.t_us;
    best->push_time(e.t_us);
    ops_ += 6;
  } else if (clusters_.size() < static_cast<std::size_t>(cfg_.max_clusters)) {
    EbmsCluster c;
    c.id = next_id_++;
    c.cx = e.x;
    c.cy = e.y;
    c.last_event_t = e.t_us;
    c.ring_capacity = static_cast<std::size_t>(cfg_.support_threshold);
    c.recent.reserve(c.ring_capacity);
    c.push_time(e.t_us);
    clusters_.push_back(std::move(c));
    ops_ += 2;
  }
  // with a full pool the event is dropped
}

std::vector<std::pair<std::uint64_t, Region>> EbmsTracker::visible_tracks(
    std::uint64_t t_us) const {
  const int r = static_cast<int>(std::lround(cfg_.radius));
  const int side = 2 * r;
  std::vector<std::pair<std::uint64_t, Region>> out;
  for (const EbmsCluster& c : clusters_) {
    if (c.support(t_us, cfg_.horizon_us) < cfg_.support_threshold) continue;
    Region box{round_half_up(c.cx) - r, round_half_up(c.cy) - r, std::min(side, sensor_.width),
               std::min(side, sensor_.height)};
    box.x = std::clamp(box.x, 0, sensor_.width - box.w);
    box.y = std::clamp(box.y, 0, sensor_.height - box.h);
    out.emplace_back(c.id, box);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::size_t EbmsTracker::state_bytes() const {
  const std::size_t per_cluster =
      sizeof(EbmsCluster) + static_cast<std::size_t>(cfg_.support_threshold) * sizeof(std::uint64_t);
  return sizeof(*this) + static_cast<std::size_t>(cfg_.max_clusters) * per_cluster;
}

}  // namespace evtrack
