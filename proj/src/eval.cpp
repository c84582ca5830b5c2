#include "evtrack/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "evtrack/tracker.hpp"

namespace evtrack {

FrameMatch match_frame(std::span<const Region> tracks, std::span<const Region> gts,
                       double iou_thr) {
  struct Candidate {
    double iou;
    int track;
    int gt;
  };
  std::vector<Candidate> cands;
  for (int ti = 0; ti < static_cast<int>(tracks.size()); ++ti)
    for (int gi = 0; gi < static_cast<int>(gts.size()); ++gi) {
      const double v = iou(tracks[ti], gts[gi]);
      if (v >= iou_thr && v > 0.0) cands.push_back(Candidate{v, ti, gi});
    }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.track != b.track) return a.track < b.track;
    return a.gt < b.gt;
  });

  FrameMatch m;
  std::vector<char> track_used(tracks.size(), 0), gt_used(gts.size(), 0);
  for (const Candidate& c : cands) {
    if (track_used[c.track] || gt_used[c.gt]) continue;
    track_used[c.track] = gt_used[c.gt] = 1;
    m.pairs.emplace_back(c.track, c.gt);
    m.matched_iou_sum += c.iou;
  }
  m.tp = static_cast<long long>(m.pairs.size());
  m.fp = static_cast<long long>(tracks.size()) - m.tp;
  m.fn = static_cast<long long>(gts.size()) - m.tp;
  return m;
}

std::vector<CurvePoint> pr_sweep(std::span<const FrameBoxes> frames,
                                 std::span<const double> thresholds) {
  std::vector<CurvePoint> curve;
  for (double thr : thresholds) {
    if (thr <= 0.0 || thr > 1.0) throw ConfigError("IoU thresholds must lie in (0,1]");
    CurvePoint pt;
    pt.iou_thr = thr;
    double iou_sum = 0.0;
    long long tp = 0, fp = 0, fn = 0;
    for (const FrameBoxes& f : frames) {
      const FrameMatch m = match_frame(f.tracks, f.gts, thr);
      tp += m.tp;
      fp += m.fp;
      fn += m.fn;
      iou_sum += m.matched_iou_sum;
    }
    pt.tp = tp;
    pt.fp = fp;
    pt.fn = fn;
    pt.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
    pt.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0;
    pt.mean_matched_iou = tp ? iou_sum / static_cast<double>(tp) : 0.0;
    curve.push_back(pt);
  }
  return curve;
}

std::vector<FrameBoxes> pair_frames(std::span<const TrackRecord> records,
                                    std::span<const GroundTruthTrack> ground_truth,
                                    bool interpolate) {
  std::map<std::uint64_t, FrameBoxes> by_time;

  if (!interpolate) {
    for (const TrackRecord& r : records) by_time[r.t_us].tracks.push_back(r.region());
    for (const GroundTruthTrack& g : ground_truth)
      for (const GroundTruthSample& s : g.samples) by_time[s.t_us].gts.push_back(s.region);
  } else {
    // evaluate at ground-truth times only, tracks contribute interpolated
    // boxes wherever their recorded span covers the time
    TrackHistory history;
    for (const TrackRecord& r : records) history.append(r.id, r.t_us, r.region());

    std::set<std::uint64_t> gt_times;
    for (const GroundTruthTrack& g : ground_truth)
      for (const GroundTruthSample& s : g.samples) {
        by_time[s.t_us].gts.push_back(s.region);
        gt_times.insert(s.t_us);
      }

    for (std::uint64_t id : history.ids()) {
      const auto* samples = history.samples(id);
      for (std::uint64_t t : gt_times) {
        if (t < samples->front().t_us || t > samples->back().t_us) continue;
        const RegionF r = history.interpolate(id, t);
        by_time[t].tracks.push_back(r.rounded());
      }
    }
  }

  std::vector<FrameBoxes> out;
  out.reserve(by_time.size());
  for (auto& [t, boxes] : by_time) {
    boxes.t_us = t;
    out.push_back(std::move(boxes));
  }
  return out;
}

std::vector<double> parse_threshold_spec(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0 ||
        start > stop)
      throw ConfigError("bad threshold range '" + spec + "' (want start:stop:step)");
    // inclusive endpoints, tolerant of float accumulation
    for (int i = 0;; ++i) {
      const double v = start + i * step;
      if (v > stop + step * 1e-9) break;
      out.push_back(v);
    }
  } else {
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty()) continue;
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        throw ConfigError("bad threshold '" + item + "'");
      }
      if (used != item.size()) throw ConfigError("bad threshold '" + item + "'");
      out.push_back(v);
    }
  }
  for (double v : out)
    if (!(v > 0.0) || v > 1.0)
      throw ConfigError("threshold " + std::to_string(v) + " outside (0, 1]");
  if (out.empty()) throw ConfigError("empty threshold list '" + spec + "'");
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string metrics_to_text(std::span<const CurvePoint> curve, const ResourceReport* resources) {
  std::ostringstream out;
  out << "# per-frame greedy matching\n";
  out << "iou_thr,precision,recall,tp,fp,fn\n";
  for (const CurvePoint& p : curve)
    out << fmt(p.iou_thr) << "," << fmt(p.precision) << "," << fmt(p.recall) << "," << p.tp << ","
        << p.fp << "," << p.fn << "\n";
  if (resources) out << "\n" << to_text(*resources);
  return out.str();
}

std::string metrics_to_kv(std::span<const CurvePoint> curve, const ResourceReport* resources) {
  std::ostringstream out;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const CurvePoint& p = curve[i];
    const std::string prefix = "curve." + std::to_string(i) + ".";
    out << prefix << "iou_thr = " << fmt(p.iou_thr) << "\n";
    out << prefix << "precision = " << fmt(p.precision) << "\n";
    out << prefix << "recall = " << fmt(p.recall) << "\n";
    out << prefix << "tp = " << p.tp << "\n";
    out << prefix << "fp = " << p.fp << "\n";
    out << prefix << "fn = " << p.fn << "\n";
  }
  if (resources) {
    out << "resources.state_bytes = " << resources->state_bytes << "\n";
    out << "resources.ops = " << resources->ops << "\n";
    out << "resources.frames = " << resources->frames << "\n";
    out << "resources.events = " << resources->events << "\n";
  }
  return out.str();
}

std::string curve_to_csv(std::span<const CurvePoint> curve) {
  std::ostringstream out;
  out << "iou_thr,precision,recall,tp,fp,fn,mean_matched_iou\n";
  for (const CurvePoint& p : curve)
    out << fmt(p.iou_thr) << "," << fmt(p.precision) << "," << fmt(p.recall) << "," << p.tp << ","
        << p.fp << "," << p.fn << "," << fmt(p.mean_matched_iou) << "\n";
  return out.str();
}

}  // namespace evtrack
