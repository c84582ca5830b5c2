// Acceptance gate for the tracking engine. Each criterion prints exactly
// one PASS/FAIL line; the process exits nonzero when any criterion fails.
// Tolerances are pinned here on purpose: they are part of the contract.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evtrack/classify_export.hpp"
#include "evtrack/config.hpp"
#include "evtrack/ebms.hpp"
#include "evtrack/eval.hpp"
#include "evtrack/event_io.hpp"
#include "evtrack/pipeline.hpp"
#include "evtrack/quant.hpp"
#include "evtrack/records.hpp"
#include "evtrack/synth.hpp"
#include "evtrack/tracker.hpp"

using namespace evtrack;

namespace {

struct Gate {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& msg) {
    if (cond) return;
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += msg;
  }
  void note(const std::string& msg) {
    if (!detail.empty()) detail += "; ";
    detail += msg;
  }
};

std::string fmt(double v, int prec = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

// ---------------------------------------------------------------- C1 --

void c1_budgets_and_threshold(Gate& g) {
  // spike budget arithmetic
  g.require(break_even_spikes(32, 32, 24) == 43,
            "break_even(32,32,24) = " + std::to_string(break_even_spikes(32, 32, 24)));

  // the slot pool never exceeds eight concurrent tracks, even when the
  // scene offers nine targets
  SceneSpec spec = scene_preset("nine_objects");
  auto scene = generate_scene(spec, 33000);
  PipelineConfig cfg;
  auto result = run_overlap_pipeline(scene.events, cfg);
  std::map<std::uint64_t, int> per_frame;
  std::set<std::uint64_t> concurrent_ids;
  for (const auto& r : result.records) ++per_frame[r.t_us];
  int peak = 0;
  for (const auto& [t, n] : per_frame) peak = std::max(peak, n);
  g.require(peak <= 8, "peak concurrent tracks " + std::to_string(peak));
  g.require(!result.records.empty(), "nine-object scene produced no tracks");

  // assignment demands an overlap ratio strictly above 0.20
  {
    OverlapTracker trk{TrackerConfig{}, SensorGeometry{}};
    trk.step(std::vector<Region>{{0, 0, 10, 10}}, 1000000);
    // ratio exactly 0.20: must NOT match; the proposal becomes a birth
    trk.step(std::vector<Region>{{8, 0, 10, 10}}, 2000000);
    int occupied = 0;
    for (const auto& s : trk.slots())
      if (s.state != TrackState::Free) ++occupied;
    g.require(occupied == 2, "ratio == 0.20 was treated as a match");
  }
  {
    OverlapTracker trk{TrackerConfig{}, SensorGeometry{}};
    trk.step(std::vector<Region>{{0, 0, 10, 10}}, 1000000);
    // ratio 0.30: must match and update the existing track
    trk.step(std::vector<Region>{{7, 0, 10, 10}}, 2000000);
    int occupied = 0;
    for (const auto& s : trk.slots())
      if (s.state != TrackState::Free) ++occupied;
    g.require(occupied == 1, "ratio 0.30 did not match");
  }
}

// ---------------------------------------------------------------- C2 --

void c2_update_equations(Gate& g) {
  const Region prev{10, 20, 10, 10};
  const Region prop{99, 3, 7, 8};

  // alpha = 0: the proposal is copied exactly
  g.require(weighted_update(prop, prev, 30.0, -20.0, 0.0, 0.5) == prop,
            "alpha=0 did not return the proposal");
  // alpha = 1: the prediction is copied exactly
  const Region pred = weighted_update(prop, prev, 30.0, -20.0, 1.0, 0.5);
  g.require(pred == Region{25, 10, 10, 10}, "alpha=1 prediction mismatch");

  // with a static box the velocity estimate decays geometrically:
  // v_j = alpha^j * v_0, checked against the closed form over 20 steps
  const double alpha = 0.6, v0 = 100.0, dt = 0.1;
  double v = v0, worst = 0.0;
  for (int j = 1; j <= 20; ++j) {
    v = velocity_update(prev, prev, v, 0.0, alpha, dt).first;
    const double expect = v0 * std::pow(alpha, j);
    worst = std::max(worst, std::abs(v - expect) / expect);
  }
  g.require(worst < 1e-9, "decay deviates from closed form by " + fmt(worst, 12));
}

// ---------------------------------------------------------------- C3 --

void c3_overlap_oracle(Gate& g) {
  std::mt19937_64 rng(0x5eedULL);
  std::vector<std::uint8_t> grid(64 * 64);
  long long checked = 0, wrong = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int wa = 1 + static_cast<int>(rng() % 24), ha = 1 + static_cast<int>(rng() % 24);
    const int wb = 1 + static_cast<int>(rng() % 24), hb = 1 + static_cast<int>(rng() % 24);
    const Region a{static_cast<int>(rng() % (64 - wa + 1)),
                   static_cast<int>(rng() % (64 - ha + 1)), wa, ha};
    const Region b{static_cast<int>(rng() % (64 - wb + 1)),
                   static_cast<int>(rng() % (64 - hb + 1)), wb, hb};

    std::fill(grid.begin(), grid.end(), 0);
    for (int y = a.y; y < a.bottom(); ++y)
      for (int x = a.x; x < a.right(); ++x) grid[y * 64 + x] = 1;
    long long oracle = 0;
    for (int y = b.y; y < b.bottom(); ++y)
      for (int x = b.x; x < b.right(); ++x) oracle += grid[y * 64 + x];

    ++checked;
    if (overlap_area(a, b) != oracle || overlap_area(b, a) != oracle) ++wrong;
  }
  g.require(wrong == 0,
            std::to_string(wrong) + " of " + std::to_string(checked) + " pairs disagree");
}

// ---------------------------------------------------------------- C4 --

void c4_single_object_convergence(Gate& g) {
  const double vx_true = 4000.0 / 33.0;  // the preset's analytic velocity
  const std::uint64_t horizon = 30 * 33000;
  int failed_seeds = 0;
  std::string first_failure;

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SceneSpec spec = scene_preset("single_const_velocity");
    spec.seed = seed;
    auto scene = generate_scene(spec, 33000);
    PipelineConfig cfg;
    auto result = run_overlap_pipeline(scene.events, cfg);

    Gate s;
    std::set<std::uint64_t> ids;
    std::map<std::uint64_t, TrackRecord> by_time;
    for (const auto& r : result.records) {
      if (r.t_us > horizon) continue;
      ids.insert(r.id);
      by_time[r.t_us] = r;
    }
    s.require(ids.size() == 1, "expected exactly one track, got " + std::to_string(ids.size()));
    s.require(!by_time.empty() && by_time.begin()->first <= 2 * 33000,
              "not locked by frame 2");

    // mean IoU against ground truth over the 30 evaluated frames
    std::map<std::uint64_t, Region> gt;
    for (const auto& smp : scene.ground_truth[0].samples)
      if (smp.t_us <= horizon) gt[smp.t_us] = smp.region;
    double iou_sum = 0.0;
    int iou_n = 0;
    for (const auto& [t, r] : by_time) {
      auto it = gt.find(t);
      if (it == gt.end()) continue;
      iou_sum += iou(Region{r.x, r.y, r.w, r.h}, it->second);
      ++iou_n;
    }
    s.require(iou_n > 0 && iou_sum / iou_n >= 0.70,
              "mean IoU " + fmt(iou_n ? iou_sum / iou_n : 0.0));

    // velocity convergence: within 10% of the analytic value at frame 10,
    // at the last evaluated frame, and on average over frames 10..29
    const auto vel_err = [&](const TrackRecord& r) {
      return std::hypot(r.vx - vx_true, r.vy - 0.0) / vx_true;
    };
    const std::uint64_t t10 = 11 * 33000;  // frame index 10 closes here
    auto it10 = by_time.find(t10);
    s.require(it10 != by_time.end() && vel_err(it10->second) <= 0.10,
              it10 == by_time.end() ? "no record at frame 10"
                                    : "frame-10 velocity error " + fmt(vel_err(it10->second)));
    if (!by_time.empty()) {
      const auto& last = by_time.rbegin()->second;
      s.require(vel_err(last) <= 0.10, "final velocity error " + fmt(vel_err(last)));
    }
    double err_sum = 0.0;
    int err_n = 0;
    for (const auto& [t, r] : by_time)
      if (t >= t10) {
        err_sum += vel_err(r);
        ++err_n;
      }
    s.require(err_n > 0 && err_sum / err_n <= 0.10,
              "mean velocity error " + fmt(err_n ? err_sum / err_n : 1.0));

    if (!s.ok) {
      ++failed_seeds;
      if (first_failure.empty())
        first_failure = "seed " + std::to_string(seed) + ": " + s.detail;
    }
  }
  g.require(failed_seeds == 0,
            std::to_string(failed_seeds) + "/20 seeds failed (" + first_failure + ")");
}

// ---------------------------------------------------------------- C5 --

std::set<std::uint64_t> ids_between(const std::vector<TrackRecord>& records, std::uint64_t a,
                                    std::uint64_t b) {
  std::set<std::uint64_t> ids;
  for (const auto& r : records)
    if (r.t_us >= a && r.t_us <= b) ids.insert(r.id);
  return ids;
}

void c5_identity_through_occlusion(Gate& g) {
  struct SceneWindows {
    const char* name;
    std::uint64_t pre_a, pre_b, post_a, post_b;
  };
  const SceneWindows scenes[] = {
      // boxes meet around t=0.87 s and separate by t=1.0 s
      {"crossing_opposite", 200000, 600000, 1450000, 1950000},
      // the fast box clears the slow one around t=1.3 s
      {"overtake_same_direction", 200000, 550000, 1450000, 1580000},
  };

  for (const auto& sw : scenes) {
    int passes = 0;
    std::string first_failure;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      SceneSpec spec = scene_preset(sw.name);
      spec.seed = seed;
      auto scene = generate_scene(spec, 33000);
      PipelineConfig cfg;
      auto result = run_overlap_pipeline(scene.events, cfg);
      const auto pre = ids_between(result.records, sw.pre_a, sw.pre_b);
      const auto post = ids_between(result.records, sw.post_a, sw.post_b);
      if (pre.size() == 2 && pre == post) {
        ++passes;
      } else if (first_failure.empty()) {
        first_failure = "seed " + std::to_string(seed) + ": pre " +
                        std::to_string(pre.size()) + " ids, post " +
                        std::to_string(post.size()) + (pre == post ? " (equal)" : " (differ)");
      }
    }
    g.require(passes >= 18, std::string(sw.name) + " kept identities in only " +
                                std::to_string(passes) + "/20 seeds (" + first_failure + ")");
    g.note(std::string(sw.name) + " " + std::to_string(passes) + "/20");
  }

  // the split formulas on the worked example: a 30x12 shared box grown
  // from two 10x10 tracks
  Track a, b;
  a.id = 1;
  a.region = Region{45, 20, 10, 10};
  a.vx = 90.0;
  a.state = TrackState::Locked;
  a.pre_occlusion_size = std::make_pair(10, 10);
  b.id = 2;
  b.region = Region{68, 22, 10, 10};
  b.vx = -90.0;
  b.state = TrackState::Locked;
  b.pre_occlusion_size = std::make_pair(10, 10);
  const Region prop{50, 20, 30, 12};

  OcclusionFlags f;
  f.width_increased = true;
  f.common_direction = false;  // opposing: the first track leads
  auto [ra, rb] = resolve_occlusion(a, b, prop, f);
  g.require(ra == Region{70, 22, 10, 10} && rb == Region{50, 20, 10, 10},
            "opposing-direction split formula mismatch");
  f.common_direction = true;
  f.higher_velocity = false;  // same direction, second at least as fast: roles swap
  auto [rc, rd] = resolve_occlusion(a, b, prop, f);
  g.require(rc == Region{50, 20, 10, 10} && rd == Region{70, 22, 10, 10},
            "same-direction split formula mismatch");
}

// ---------------------------------------------------------------- C6 --

void c6_interpolation(Gate& g) {
  TrackHistory h;
  // linear motion: x = 3 + 7k, y = 100 - 2k, w/h constant
  for (std::uint64_t k = 0; k <= 10; ++k)
    h.append(4, 1000 * k, Region{3 + 7 * static_cast<int>(k), 100 - 2 * static_cast<int>(k),
                                 24, 18});

  double worst = 0.0;
  for (std::uint64_t t = 0; t <= 10000; t += 125) {
    const RegionF r = h.interpolate(4, t);
    const double s = static_cast<double>(t) / 1000.0;
    worst = std::max(worst, std::abs(r.x - (3.0 + 7.0 * s)));
    worst = std::max(worst, std::abs(r.y - (100.0 - 2.0 * s)));
    worst = std::max(worst, std::abs(r.w - 24.0));
    worst = std::max(worst, std::abs(r.h - 18.0));
  }
  g.require(worst <= 1e-9, "linear-motion deviation " + fmt(worst, 12));

  const RegionF first = h.interpolate(4, 0);
  const RegionF last = h.interpolate(4, 10000);
  g.require(first.x == 3.0 && first.y == 100.0 && last.x == 73.0 && last.y == 80.0,
            "endpoints are not returned exactly");
}

// ---------------------------------------------------------------- C7 --

struct SuiteCounts {
  long long tp = 0, fp = 0, fn = 0;

  void add(const SuiteCounts& o) { tp += o.tp; fp += o.fp; fn += o.fn; }
  double precision() const { return tp + fp == 0 ? 1.0 : double(tp) / double(tp + fp); }
  double recall() const { return tp + fn == 0 ? 1.0 : double(tp) / double(tp + fn); }
};

SuiteCounts score_scene(const SceneSpec& spec, const PipelineConfig& cfg) {
  auto scene = generate_scene(spec, cfg.frame.period_us);
  auto result = run_overlap_pipeline(scene.events, cfg);
  auto frames = pair_frames(result.records, scene.ground_truth, false);
  const double thr[] = {0.4};
  auto curve = pr_sweep(frames, thr);
  return {curve[0].tp, curve[0].fp, curve[0].fn};
}

// Small boxes over a spread of speeds and directions: at 8-10 px a side,
// single-pixel arithmetic noise is what limits the match quality, which
// is exactly the effect the coarse datapath must pay for.
SceneSpec small_object_scene(std::uint64_t seed, double noise) {
  SceneSpec s;
  s.duration_s = 1.5;
  s.noise_rate = noise;
  s.seed = seed;
  s.objects.push_back({10.0, 20.0, 8, 8, 55.0, 10.0, 200.0, 0.0,
                       std::numeric_limits<double>::infinity()});
  s.objects.push_back({220.0, 60.0, 9, 8, -75.0, 0.0, 200.0, 0.0,
                       std::numeric_limits<double>::infinity()});
  s.objects.push_back({20.0, 120.0, 10, 9, 100.0, -15.0, 200.0, 0.0,
                       std::numeric_limits<double>::infinity()});
  s.objects.push_back({200.0, 160.0, 8, 10, -60.0, -20.0, 200.0, 0.0,
                       std::numeric_limits<double>::infinity()});
  return s;
}

// full suite: the preset scenes under speckle plus the small-object
// scenes; used for the parity and high-precision bounds
SuiteCounts run_full_suite(const PipelineConfig& cfg) {
  SuiteCounts total;
  const char* names[] = {"single_const_velocity", "crossing_opposite",
                         "overtake_same_direction"};
  for (const char* name : names)
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      SceneSpec spec = scene_preset(name);
      spec.noise_rate = 0.3;
      spec.seed = seed;
      total.add(score_scene(spec, cfg));
    }
  for (double noise : {0.3, 0.5})
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
      total.add(score_scene(small_object_scene(seed, noise), cfg));
  return total;
}

// noise-dominated subset: small objects in heavy speckle, where match
// quality hinges on box placement rather than occlusion lifecycles
SuiteCounts run_noise_stress(const PipelineConfig& cfg) {
  SuiteCounts total;
  for (double noise : {0.3, 0.5})
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
      total.add(score_scene(small_object_scene(seed, noise), cfg));
  return total;
}

void c7_fixed_point_parity(Gate& g) {
  PipelineConfig fl;
  PipelineConfig fx = fl;
  fx.fx.enabled = true;  // default integer pixels, sixteenth-pixel velocities
  PipelineConfig hi = fl;
  hi.fx.enabled = true;
  hi.fx.pos_int_bits = 8;  // 240 px wide sensor fits; 8+24 fills the 32-bit word
  hi.fx.pos_frac_bits = 24;
  hi.fx.vel_int_bits = 8;
  hi.fx.vel_frac_bits = 24;

  // parity over the whole suite
  const SuiteCounts f = run_full_suite(fl);
  const SuiteCounts q = run_full_suite(fx);
  const double dp = q.precision() - f.precision();
  const double dr = q.recall() - f.recall();
  g.require(std::abs(dp) <= 0.10, "|precision gap| " + fmt(std::abs(dp)));
  g.require(std::abs(dr) <= 0.10, "|recall gap| " + fmt(std::abs(dr)));

  // coarse arithmetic must not outperform the float datapath where noise
  // and box placement dominate the score
  const SuiteCounts nf = run_noise_stress(fl);
  const SuiteCounts nq = run_noise_stress(fx);
  const double ndp = nq.precision() - nf.precision();
  const double ndr = nq.recall() - nf.recall();
  g.require(ndp <= 1e-9 && ndr <= 1e-9,
            "fixed run scored better on noise (dP " + fmt(ndp) + ", dR " + fmt(ndr) + ")");

  // with 24 fractional bits the datapath converges onto the float run
  const SuiteCounts h = run_full_suite(hi);
  const double hp = std::abs(h.precision() - f.precision());
  const double hr = std::abs(h.recall() - f.recall());
  g.require(hp < 0.01 && hr < 0.01,
            "24-bit fraction gap P " + fmt(hp) + " R " + fmt(hr));
  g.note("suite dP " + fmt(dp) + " dR " + fmt(dr) + ", noise dP " + fmt(ndp) + " dR " +
         fmt(ndr) + ", 24-bit gap P " + fmt(hp) + " R " + fmt(hr));
}

// ---------------------------------------------------------------- C8 --

void c8_resource_scaling(Gate& g) {
  const auto run_at = [](double scale) {
    SceneSpec spec = scene_preset("crossing_opposite");
    scale_rates(spec, scale);
    PipelineConfig cfg;
    auto scene = generate_scene(spec, cfg.frame.period_us);
    auto overlap = run_overlap_pipeline(scene.events, cfg);
    auto ebms = run_ebms_pipeline(scene.events, cfg);
    return std::pair{overlap.resources, ebms.resources};
  };

  const auto [ov4, eb4] = run_at(4.0);
  const auto [ov6, eb6] = run_at(6.0);

  const double rate4 = static_cast<double>(ov4.events) / 2.0;  // scene lasts 2 s
  g.require(rate4 >= 1e5, "event rate " + fmt(rate4, 0) + "/s below 1e5");

  g.require(ov4.state_bytes < eb4.state_bytes,
            "overlap state " + std::to_string(ov4.state_bytes) + " B not below event-driven " +
                std::to_string(eb4.state_bytes) + " B");

  const double events_ratio = static_cast<double>(ov6.events) / ov4.events;
  const double ebms_ratio = static_cast<double>(eb6.ops) / eb4.ops;
  const double overlap_ratio = static_cast<double>(ov6.ops) / ov4.ops;
  // event-driven cost follows the event rate; frame-driven cost is pinned
  // to the frame count and moves only marginally
  g.require(std::abs(ebms_ratio - events_ratio) <= 0.15 * events_ratio,
            "event-driven ops ratio " + fmt(ebms_ratio) + " vs events ratio " +
                fmt(events_ratio));
  g.require(overlap_ratio <= 1.0 + 0.5 * (events_ratio - 1.0),
            "frame-driven ops ratio " + fmt(overlap_ratio) + " grew with events ratio " +
                fmt(events_ratio));
  g.note("state " + std::to_string(ov4.state_bytes) + "/" + std::to_string(eb4.state_bytes) +
         " B, ops ratio overlap " + fmt(overlap_ratio) + " ebms " + fmt(ebms_ratio) +
         " events " + fmt(events_ratio) + ", rate " + fmt(rate4, 0) + "/s");
}

// ---------------------------------------------------------------- C9 --

void c9_sweep_laws(Gate& g) {
  // real tracker output on a two-object scene
  SceneSpec spec = scene_preset("crossing_opposite");
  spec.seed = 5;
  auto scene = generate_scene(spec, 33000);
  PipelineConfig cfg;
  auto result = run_overlap_pipeline(scene.events, cfg);
  auto frames = pair_frames(result.records, scene.ground_truth, false);

  std::vector<double> thresholds;
  for (int i = 1; i <= 20; ++i) thresholds.push_back(0.05 * i);
  auto curve = pr_sweep(frames, thresholds);

  long long tracks_total = 0, gts_total = 0;
  for (const auto& f : frames) {
    tracks_total += static_cast<long long>(f.tracks.size());
    gts_total += static_cast<long long>(f.gts.size());
  }
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (i > 0) {
      g.require(curve[i].precision <= curve[i - 1].precision + 1e-12,
                "precision rose at thr " + fmt(curve[i].iou_thr, 2));
      g.require(curve[i].recall <= curve[i - 1].recall + 1e-12,
                "recall rose at thr " + fmt(curve[i].iou_thr, 2));
    }
    g.require(curve[i].tp + curve[i].fp == tracks_total,
              "tp+fp mismatch at thr " + fmt(curve[i].iou_thr, 2));
    g.require(curve[i].tp + curve[i].fn == gts_total,
              "tp+fn mismatch at thr " + fmt(curve[i].iou_thr, 2));
  }

  // a flawless tracker (ground truth echoed back) scores 1.0 up to 0.7
  SceneSpec sspec = scene_preset("single_const_velocity");
  auto sscene = generate_scene(sspec, 33000);
  std::vector<TrackRecord> echo;
  for (const auto& t : sscene.ground_truth)
    for (const auto& smp : t.samples) {
      TrackRecord r;
      r.t_us = smp.t_us;
      r.id = t.object_id;
      r.x = smp.region.x;
      r.y = smp.region.y;
      r.w = smp.region.w;
      r.h = smp.region.h;
      echo.push_back(r);
    }
  std::sort(echo.begin(), echo.end(),
            [](const TrackRecord& a, const TrackRecord& b) { return a.t_us < b.t_us; });
  auto eframes = pair_frames(echo, sscene.ground_truth, false);
  const double ethr[] = {0.3, 0.5, 0.7};
  auto ecurve = pr_sweep(eframes, ethr);
  for (const auto& p : ecurve)
    g.require(p.precision == 1.0 && p.recall == 1.0,
              "echoed ground truth scored P " + fmt(p.precision) + " R " + fmt(p.recall) +
                  " at thr " + fmt(p.iou_thr, 1));
}

// --------------------------------------------------------------- C10 --

void c10_vote_accuracy(Gate& g) {
  const std::vector<std::string> labels = {"A", "B", "C"};
  const double ps[] = {0.6, 0.7, 0.8};
  std::mt19937_64 rng(0xACCE55ULL);
  const auto uniform01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  for (double p : ps) {
    int correct = 0;
    const int tracks = 1000, samples = 15;  // well above the 9-sample floor
    for (int t = 0; t < tracks; ++t) {
      const std::size_t truth = rng() % labels.size();
      std::vector<std::string> seq;
      seq.reserve(samples);
      for (int s = 0; s < samples; ++s) {
        if (uniform01() < p) {
          seq.push_back(labels[truth]);
        } else {
          // a wrong classification, uniform over the other labels
          const std::size_t other = rng() % (labels.size() - 1);
          seq.push_back(labels[(truth + 1 + other) % labels.size()]);
        }
      }
      if (majority_vote(seq) == labels[truth]) ++correct;
    }
    const double accuracy = static_cast<double>(correct) / tracks;
    g.require(accuracy > p, "p=" + fmt(p, 1) + ": vote accuracy " + fmt(accuracy, 3) +
                                " not above per-frame accuracy");
    g.note("p=" + fmt(p, 1) + " -> " + fmt(accuracy, 3));
  }
}

// --------------------------------------------------------------- C11 --

void c11_reproducibility(Gate& g) {
  SceneSpec spec = scene_preset("crossing_opposite");
  spec.seed = 7;

  const auto scene_a = generate_scene(spec, 33000);
  const auto scene_b = generate_scene(spec, 33000);
  g.require(events_to_csv(scene_a.events) == events_to_csv(scene_b.events),
            "scene generation is not byte-stable");
  g.require(ground_truth_to_csv(scene_a.ground_truth) ==
                ground_truth_to_csv(scene_b.ground_truth),
            "ground truth is not byte-stable");

  PipelineConfig cfg;
  const auto t1 = run_overlap_pipeline(scene_a.events, cfg);
  const auto t2 = run_overlap_pipeline(scene_b.events, cfg);
  g.require(track_records_to_jsonl(t1.records) == track_records_to_jsonl(t2.records),
            "frame pipeline output is not byte-stable");

  const auto e1 = run_ebms_pipeline(scene_a.events, cfg);
  const auto e2 = run_ebms_pipeline(scene_b.events, cfg);
  g.require(track_records_to_jsonl(e1.records) == track_records_to_jsonl(e2.records),
            "event-driven pipeline output is not byte-stable");

  const auto x1 = export_crops(scene_a.events, t1.records, cfg);
  const auto x2 = export_crops(scene_b.events, t2.records, cfg);
  bool crops_equal = x1.crops.size() == x2.crops.size();
  for (std::size_t i = 0; crops_equal && i < x1.crops.size(); ++i)
    crops_equal = x1.crops[i].track_id == x2.crops[i].track_id &&
                  x1.crops[i].t_us == x2.crops[i].t_us &&
                  x1.crops[i].image.bits == x2.crops[i].image.bits &&
                  x1.crops[i].spikes == x2.crops[i].spikes;
  g.require(crops_equal, "exported crops are not byte-stable");

  // a different seed must actually change the stream
  spec.seed = 8;
  const auto scene_c = generate_scene(spec, 33000);
  g.require(events_to_csv(scene_c.events) != events_to_csv(scene_a.events),
            "seed change did not change the stream");
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* description;
    std::function<void(Gate&)> fn;
  };
  const Criterion criteria[] = {
      {"C1", "spike budget, slot bound and strict assignment threshold", c1_budgets_and_threshold},
      {"C2", "update equations: blend extremes exact, geometric velocity decay", c2_update_equations},
      {"C3", "box overlap equals the pixel-set oracle on 10000 random pairs", c3_overlap_oracle},
      {"C4", "single object: one track, early lock, IoU and velocity convergence", c4_single_object_convergence},
      {"C5", "identities survive crossing and overtake; split formulas exact", c5_identity_through_occlusion},
      {"C6", "history interpolation exact on linear motion and endpoints", c6_interpolation},
      {"C7", "fixed-point parity within 0.10, never better on noise, 24-bit converges", c7_fixed_point_parity},
      {"C8", "frame-driven tracker: less state, ops pinned to frames not events", c8_resource_scaling},
      {"C9", "sweep monotonicity, count conservation, perfect run scores 1.0", c9_sweep_laws},
      {"C10", "majority vote beats per-frame accuracy at p=0.6/0.7/0.8", c10_vote_accuracy},
      {"C11", "identical config and seed reproduce byte-identical outputs", c11_reproducibility},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Gate gate;
    try {
      c.fn(gate);
    } catch (const std::exception& e) {
      gate.ok = false;
      gate.detail = std::string("exception: ") + e.what();
    }
    if (gate.ok) {
      std::printf("PASS %s: %s%s%s\n", c.id, c.description,
                  gate.detail.empty() ? "" : " -- ", gate.detail.c_str());
    } else {
      ++failures;
      std::printf("FAIL %s: %s -- %s\n", c.id, c.description, gate.detail.c_str());
    }
    std::fflush(stdout);
  }
  if (failures > 0) std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
