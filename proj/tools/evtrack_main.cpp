// evtrack: deterministic event-camera multi-object tracking pipeline.
//
// Subcommands:
//   synth   generate a synthetic event scene with ground truth
//   track   run the overlap tracker (or the EBMS baseline) over events
//   eval    precision/recall sweep of track output against ground truth
//   export  crops, spike lists and classifier schedule for locked tracks
//   bench   paired overlap-vs-EBMS resource comparison
//
// All outputs are byte-reproducible for a fixed config and seed.

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evtrack/config.hpp"
#include "evtrack/event_io.hpp"
#include "evtrack/eval.hpp"
#include "evtrack/image_io.hpp"
#include "evtrack/pipeline.hpp"
#include "evtrack/records.hpp"
#include "evtrack/synth.hpp"

namespace fs = std::filesystem;
using namespace evtrack;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
};

// defaults < config file < ETRK_* environment < command-line flags
PipelineConfig make_config(const GlobalOpts& g) {
  PipelineConfig cfg;
  if (!g.config_path.empty()) load_config_file(cfg, g.config_path);
  apply_env_overrides(cfg);
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

std::string out_path(const GlobalOpts& g, const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return name;
  return (fs::path(g.out_dir) / p).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
}

EventFormat parse_format(const std::string& name) {
  if (name == "csv") return EventFormat::Csv;
  if (name == "raw") return EventFormat::Raw;
  throw ConfigError("unknown event format '" + name + "' (want csv or raw)");
}

// ---------------------------------------------------------------- synth

int cmd_synth(const GlobalOpts& g, const std::string& preset, const std::string& scene_file,
              double rate_scale, double duration_override) {
  PipelineConfig cfg = make_config(g);

  SceneSpec spec;
  if (!scene_file.empty())
    spec = parse_scene_text(read_file(scene_file));
  else
    spec = scene_preset(preset);
  spec.seed = cfg.seed;
  spec.sensor = cfg.sensor;
  if (duration_override > 0.0) spec.duration_s = duration_override;
  if (rate_scale != 1.0) scale_rates(spec, rate_scale);

  const Scene scene = generate_scene(spec, cfg.frame.period_us);

  ensure_out_dir(g.out_dir);
  write_file(out_path(g, "events.csv"), events_to_csv(scene.events));
  write_file(out_path(g, "ground_truth.csv"), ground_truth_to_csv(scene.ground_truth));
  write_file(out_path(g, "scene.txt"), scene_to_text(spec));

  std::printf("synth: %zu events, %zu ground-truth tracks -> %s\n", scene.events.size(),
              scene.ground_truth.size(), g.out_dir.c_str());
  return 0;
}

// ---------------------------------------------------------------- track

int cmd_track(const GlobalOpts& g, const std::string& events_path, const std::string& format,
              const std::string& tracker_name, bool fixed, const std::string& out_name,
              const std::string& overlay_dir, const std::string& gt_path,
              const std::string& resources_name) {
  PipelineConfig cfg = make_config(g);
  if (fixed) cfg.fx.enabled = true;

  const std::vector<Event> events = load_events(events_path, parse_format(format), cfg.sensor);

  // ground truth, only needed to draw overlay boxes
  std::map<std::uint64_t, std::vector<Region>> gt_by_time;
  if (!gt_path.empty())
    for (const GroundTruthTrack& t : parse_ground_truth_csv(read_file(gt_path)))
      for (const GroundTruthSample& s : t.samples) gt_by_time[s.t_us].push_back(s.region);

  FrameObserver observer;
  if (!overlay_dir.empty()) {
    ensure_out_dir(out_path(g, overlay_dir));
    observer = [&](const BinaryFrame& frame, std::span<const Region>,
                   std::span<const TrackRecord> records) {
      const auto it = gt_by_time.find(frame.t_end_us);
      static const std::vector<Region> kNone;
      const RgbImage img =
          render_overlay(frame, records, it == gt_by_time.end() ? kNone : it->second);
      char name[64];
      std::snprintf(name, sizeof name, "frame%06llu.ppm",
                    static_cast<unsigned long long>(frame.index));
      write_file(out_path(g, overlay_dir + "/" + name), encode_ppm(img));
    };
  }

  PipelineResult result;
  if (tracker_name == "overlap")
    result = run_overlap_pipeline(events, cfg, observer);
  else if (tracker_name == "ebms")
    result = run_ebms_pipeline(events, cfg);
  else
    throw ConfigError("unknown tracker '" + tracker_name + "' (want overlap or ebms)");

  ensure_out_dir(g.out_dir);
  write_file(out_path(g, out_name), track_records_to_jsonl(result.records));
  if (!resources_name.empty()) {
    std::string kv;
    kv += "resources.label = " + result.resources.label + "\n";
    kv += "resources.state_bytes = " + std::to_string(result.resources.state_bytes) + "\n";
    kv += "resources.ops = " + std::to_string(result.resources.ops) + "\n";
    kv += "resources.frames = " + std::to_string(result.resources.frames) + "\n";
    kv += "resources.events = " + std::to_string(result.resources.events) + "\n";
    write_file(out_path(g, resources_name), kv);
  }

  std::printf("track: %zu events over %llu frames -> %zu records\n", events.size(),
              static_cast<unsigned long long>(result.resources.frames), result.records.size());
  return 0;
}

// ---------------------------------------------------------------- eval

ResourceReport parse_resources_kv(const std::string& text) {
  ResourceReport r;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() : eol + 1;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    const auto trim = [](std::string s) {
      const std::size_t a = s.find_first_not_of(" \t\r");
      const std::size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "resources.label") r.label = value;
    else if (key == "resources.state_bytes") r.state_bytes = std::stoull(value);
    else if (key == "resources.ops") r.ops = std::stoull(value);
    else if (key == "resources.frames") r.frames = std::stoull(value);
    else if (key == "resources.events") r.events = std::stoull(value);
  }
  return r;
}

int cmd_eval(const GlobalOpts& g, const std::string& tracks_path, const std::string& gt_path,
             const std::string& thresholds, const std::string& report_name,
             const std::string& kv_name, const std::string& curve_name, bool interpolate,
             const std::string& resources_path) {
  PipelineConfig cfg = make_config(g);
  if (interpolate) cfg.eval.interpolate = true;

  const std::vector<TrackRecord> records = parse_track_jsonl(read_file(tracks_path));
  const std::vector<GroundTruthTrack> gt = parse_ground_truth_csv(read_file(gt_path));
  const std::vector<double> thrs = parse_threshold_spec(thresholds);

  const std::vector<FrameBoxes> frames = pair_frames(records, gt, cfg.eval.interpolate);
  const std::vector<CurvePoint> curve = pr_sweep(frames, thrs);

  std::optional<ResourceReport> resources;
  if (!resources_path.empty()) resources = parse_resources_kv(read_file(resources_path));

  const std::string report = metrics_to_text(curve, resources ? &*resources : nullptr);
  std::fputs(report.c_str(), stdout);

  ensure_out_dir(g.out_dir);
  write_file(out_path(g, report_name), report);
  write_file(out_path(g, kv_name), metrics_to_kv(curve, resources ? &*resources : nullptr));
  if (!curve_name.empty()) write_file(out_path(g, curve_name), curve_to_csv(curve));
  return 0;
}

// ---------------------------------------------------------------- export

int cmd_export(const GlobalOpts& g, const std::string& events_path, const std::string& format,
               const std::string& tracks_path, int size, const std::string& vote_labels_path,
               const std::string& stub_labels) {
  PipelineConfig cfg = make_config(g);
  if (size > 0) cfg.exp.size = size;

  const std::vector<Event> events = load_events(events_path, parse_format(format), cfg.sensor);
  const std::vector<TrackRecord> records = parse_track_jsonl(read_file(tracks_path));
  const ExportResult result = export_crops(events, records, cfg);

  ensure_out_dir(g.out_dir);

  std::string manifest = "# id,frame,t_us,file\n";
  std::string spikes = "# id,frame,row,col\n";
  for (const ExportedCrop& crop : result.crops) {
    char name[64];
    std::snprintf(name, sizeof name, "track%llu_frame%llu.pbm",
                  static_cast<unsigned long long>(crop.track_id),
                  static_cast<unsigned long long>(crop.frame_index));
    write_file(out_path(g, name), encode_pbm(crop.image));
    manifest += std::to_string(crop.track_id) + "," + std::to_string(crop.frame_index) + "," +
                std::to_string(crop.t_us) + "," + name + "\n";
    for (const Spike& s : crop.spikes)
      spikes += std::to_string(crop.track_id) + "," + std::to_string(crop.frame_index) + "," +
                std::to_string(s.row) + "," + std::to_string(s.col) + "\n";
  }
  write_file(out_path(g, "manifest.csv"), manifest);
  write_file(out_path(g, "spikes.csv"), spikes);

  std::string schedule = "# frame,t_us,slot,id\n";
  for (const auto& fs : result.schedule) {
    for (int s = 0; s < SlotSchedule::kSlots; ++s)
      if (fs.slot_ids[s] != 0)
        schedule += std::to_string(fs.frame_index) + "," + std::to_string(fs.t_us) + "," +
                    std::to_string(s) + "," + std::to_string(fs.slot_ids[s]) + "\n";
    for (std::uint64_t id : fs.unscheduled)
      schedule += std::to_string(fs.frame_index) + "," + std::to_string(fs.t_us) + ",-1," +
                  std::to_string(id) + "\n";
  }
  write_file(out_path(g, "schedule.csv"), schedule);

  // per-sample labels: either provided, or produced by the stub classifier
  std::vector<std::pair<std::uint64_t, std::string>> labels;
  if (!vote_labels_path.empty()) {
    const std::string text = read_file(vote_labels_path);
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
      ++line_no;
      std::size_t eol = text.find('\n', pos);
      std::string line =
          text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
      pos = eol == std::string::npos ? text.size() : eol + 1;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      // id,frame,label or id,label
      const std::size_t c1 = line.find(',');
      if (c1 == std::string::npos)
        throw ParseError("labels line " + std::to_string(line_no) + ": expected id,label");
      const std::size_t c2 = line.find(',', c1 + 1);
      const std::string label =
          c2 == std::string::npos ? line.substr(c1 + 1) : line.substr(c2 + 1);
      labels.emplace_back(std::stoull(line.substr(0, c1)), label);
    }
  } else if (!stub_labels.empty()) {
    std::vector<std::string> classes;
    std::size_t start = 0;
    while (start <= stub_labels.size()) {
      const std::size_t comma = stub_labels.find(',', start);
      classes.push_back(stub_labels.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    StubClassifier classifier(classes, cfg.seed);
    std::string labels_csv = "# id,frame,label\n";
    for (const ExportedCrop& crop : result.crops) {
      const std::string label = classifier.classify(crop.image);
      labels.emplace_back(crop.track_id, label);
      labels_csv += std::to_string(crop.track_id) + "," + std::to_string(crop.frame_index) +
                    "," + label + "\n";
    }
    write_file(out_path(g, "labels.csv"), labels_csv);
  }

  if (!labels.empty()) {
    std::map<std::uint64_t, std::vector<std::string>> per_track;
    for (const auto& [id, label] : labels) per_track[id].push_back(label);
    std::string votes = "# id,label\n";
    for (const auto& [id, ls] : per_track)
      votes += std::to_string(id) + "," + majority_vote(ls) + "\n";
    write_file(out_path(g, "votes.csv"), votes);
  }

  std::printf("export: %zu crops over %zu frames -> %s\n", result.crops.size(),
              result.schedule.size(), g.out_dir.c_str());
  return 0;
}

// ---------------------------------------------------------------- bench

int cmd_bench(const GlobalOpts& g, const std::string& preset, const std::string& events_path,
              const std::string& format, double rate_scale, const std::string& report_name) {
  PipelineConfig cfg = make_config(g);

  std::vector<Event> events;
  if (!events_path.empty()) {
    events = load_events(events_path, parse_format(format), cfg.sensor);
  } else {
    SceneSpec spec = scene_preset(preset);
    spec.seed = cfg.seed;
    spec.sensor = cfg.sensor;
    if (rate_scale != 1.0) scale_rates(spec, rate_scale);
    events = generate_scene(spec, cfg.frame.period_us).events;
  }

  const PipelineResult overlap = run_overlap_pipeline(events, cfg);
  const PipelineResult ebms = run_ebms_pipeline(events, cfg);
  const ResourceComparison cmp = resource_compare(overlap.resources, ebms.resources);

  const std::string report = to_text(cmp);
  std::fputs(report.c_str(), stdout);

  ensure_out_dir(g.out_dir);
  write_file(out_path(g, report_name), report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evtrack: deterministic event-camera multi-object tracking"};
  app.require_subcommand(1);
  app.fallthrough();  // let subcommands accept the global flags below

  GlobalOpts g;
  std::uint64_t seed_flag = 0;
  app.add_option("--config", g.config_path, "config file (key = value lines)");
  app.add_option("--out-dir", g.out_dir, "directory for output files");
  auto* seed_opt = app.add_option("--seed", seed_flag, "random seed override");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic scene");
  std::string preset = "single_const_velocity", scene_file;
  double rate_scale = 1.0, duration = 0.0;
  synth->add_option("--preset", preset, "one of: single_const_velocity, crossing_opposite, "
                    "overtake_same_direction, enter_exit, nine_objects, human_scale");
  synth->add_option("--scene", scene_file, "scene description file (overrides --preset)");
  synth->add_option("--rate-scale", rate_scale, "multiply all event rates");
  synth->add_option("--duration", duration, "override scene duration, seconds");

  // track
  auto* track = app.add_subcommand("track", "run a tracker over an event stream");
  std::string events_path, format = "csv", tracker_name = "overlap";
  std::string track_out = "tracks.jsonl", overlay_dir, gt_path, resources_name;
  bool fixed = false;
  track->add_option("--events", events_path, "event stream file")->required();
  track->add_option("--format", format, "event format: csv or raw");
  track->add_option("--tracker", tracker_name, "overlap (default) or ebms");
  track->add_flag("--fixed", fixed, "emulate fixed-point arithmetic");
  track->add_option("--out", track_out, "track record output (jsonl)");
  track->add_option("--overlay-dir", overlay_dir, "write per-frame overlay images here");
  track->add_option("--gt", gt_path, "ground truth csv (drawn on overlays)");
  track->add_option("--resources", resources_name, "write resource counters (key-value)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "precision/recall against ground truth");
  std::string tracks_path, eval_gt, thresholds = "0.1:0.9:0.1";
  std::string report_name = "eval_report.txt", kv_name = "eval_metrics.kv", curve_name;
  std::string resources_path;
  bool interpolate = false;
  eval_cmd->add_option("--tracks", tracks_path, "track records (jsonl)")->required();
  eval_cmd->add_option("--gt", eval_gt, "ground truth csv")->required();
  eval_cmd->add_option("--thresholds", thresholds, "start:stop:step or comma list");
  eval_cmd->add_option("--report", report_name, "text report output");
  eval_cmd->add_option("--kv", kv_name, "machine-readable metrics output");
  eval_cmd->add_option("--curve", curve_name, "curve csv output");
  eval_cmd->add_flag("--interpolate", interpolate, "evaluate tracks at ground-truth times");
  eval_cmd->add_option("--resources", resources_path, "resource kv from `track` to embed");

  // export
  auto* export_cmd = app.add_subcommand("export", "crops and spikes for locked tracks");
  std::string exp_events, exp_format = "csv", exp_tracks, vote_path, stub_labels;
  int exp_size = 0;
  export_cmd->add_option("--events", exp_events, "event stream file")->required();
  export_cmd->add_option("--format", exp_format, "event format: csv or raw");
  export_cmd->add_option("--tracks", exp_tracks, "track records (jsonl)")->required();
  export_cmd->add_option("--size", exp_size, "crop side length");
  export_cmd->add_option("--vote", vote_path, "per-sample labels csv; writes votes.csv");
  export_cmd->add_option("--stub-labels", stub_labels,
                         "comma list of classes for the stub classifier");

  // bench
  auto* bench = app.add_subcommand("bench", "overlap vs ebms resource comparison");
  std::string bench_preset = "crossing_opposite", bench_events, bench_format = "csv";
  double bench_scale = 1.0;
  std::string bench_report = "bench_report.txt";
  bench->add_option("--preset", bench_preset, "scene preset to generate");
  bench->add_option("--events", bench_events, "use an existing event file instead");
  bench->add_option("--format", bench_format, "event format: csv or raw");
  bench->add_option("--rate-scale", bench_scale, "multiply preset event rates");
  bench->add_option("--report", bench_report, "report output file");

  CLI11_PARSE(app, argc, argv);
  if (!seed_opt->empty()) g.seed = seed_flag;

  try {
    if (synth->parsed()) return cmd_synth(g, preset, scene_file, rate_scale, duration);
    if (track->parsed())
      return cmd_track(g, events_path, format, tracker_name, fixed, track_out, overlay_dir,
                       gt_path, resources_name);
    if (eval_cmd->parsed())
      return cmd_eval(g, tracks_path, eval_gt, thresholds, report_name, kv_name, curve_name,
                      interpolate, resources_path);
    if (export_cmd->parsed())
      return cmd_export(g, exp_events, exp_format, exp_tracks, exp_size, vote_path, stub_labels);
    if (bench->parsed())
      return cmd_bench(g, bench_preset, bench_events, bench_format, bench_scale, bench_report);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
