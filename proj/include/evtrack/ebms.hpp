#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "evtrack/events.hpp"
#include "evtrack/geometry.hpp"

namespace evtrack {

/// Event-based mean-shift baseline parameters.
struct EbmsConfig {
  double radius = 15.0;             ///< cluster capture radius, pixels
  double eta = 0.1;                 ///< centroid learning rate per event
  int support_threshold = 20;       ///< events required inside the horizon to be visible
  std::uint64_t timeout_us = 100000;///< idle time before a cluster is pruned
  std::uint64_t horizon_us = 100000;///< sliding window for the visibility count
  int max_clusters = 16;
};

/// A mean-shift cluster: centroid, last activity time and a ring buffer
/// of the most recent event timestamps (capacity = support_threshold)
/// used for the visibility test.
struct EbmsCluster {
  std::uint64_t id = 0;
  double cx = 0.0;
  double cy = 0.0;
  std::uint64_t last_event_t = 0;
  std::vector<std::uint64_t> recent;  // ring storage, at most ring_capacity entries
  std::size_t ring_capacity = 0;
  std::size_t ring_pos = 0;

  void push_time(std::uint64_t t);
  std::uint64_t oldest_time() const;
  /// Events observed within [now - horizon, now].
  int support(std::uint64_t now, std::uint64_t horizon_us) const;
};

/// Per-event mean-shift tracker, the computational baseline to the
/// frame-driven tracker. Every event moves the nearest cluster centroid
/// by eta times the offset; events with no cluster within the capture
/// radius seed a new cluster (dropped when the pool is full). Clusters
/// idle for longer than timeout_us are pruned. A cluster is visible when
/// it accumulated support_threshold events within the sliding horizon.
class EbmsTracker {
 public:
  EbmsTracker(const EbmsConfig& cfg, const SensorGeometry& sensor);

  /// Feed one event; timestamps must be non-decreasing (OrderingError).
  void process_event(const Event& e);

  /// Snapshot of the visible clusters at time `t_us` as (id, region):
  /// a square box of side 2*radius centered on the rounded centroid,
  /// clamped to the sensor. Ordered by id.
  std::vector<std::pair<std::uint64_t, Region>> visible_tracks(std::uint64_t t_us) const;

  const std::vector<EbmsCluster>& clusters() const { return clusters_; }

  /// Fixed pool footprint: max_clusters worth of cluster records
  /// including their timestamp rings.
  std::size_t state_bytes() const;

  /// Arithmetic operations spent in process_event so far (distance
  /// scans, centroid updates, pruning). Grows with events.
  unsigned long long ops() const { return ops_; }

  unsigned long long events_processed() const { return events_; }

 private:
  void prune(std::uint64_t t_us);

  EbmsConfig cfg_;
  SensorGeometry sensor_;
  std::vector<EbmsCluster> clusters_;
  std::uint64_t next_id_ = 1;
  std::uint64_t last_t_us_ = 0;
  bool started_ = false;
  unsigned long long ops_ = 0;
  unsigned long long events_ = 0;
};

}  // namespace evtrack
