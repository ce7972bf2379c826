#include "gaitid/cli/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <memory>
#include <sstream>

#include "gaitid/core/error.hpp"
#include "gaitid/evalbench/metrics.hpp"
#include "gaitid/gaitsim/cohort.hpp"
#include "gaitid/gaitsim/kinematics.hpp"
#include "gaitid/io/rten.hpp"
#include "gaitid/radardsp/micro_doppler.hpp"
#include "gaitid/radardsp/micro_omega.hpp"
#include "gaitid/slicer/slicer.hpp"
#include "json.hpp"

namespace gaitid::cli {

using nlohmann::json;

namespace {

void say(const Progress& log, const std::string& m) {
  if (log) log(m);
}

const char* kind_name(gaitsim::LimbKind k) {
  switch (k) {
    case gaitsim::LimbKind::torso: return "torso";
    case gaitsim::LimbKind::head: return "head";
    case gaitsim::LimbKind::thigh: return "thigh";
    case gaitsim::LimbKind::foot: return "foot";
    case gaitsim::LimbKind::arm: return "arm";
  }
  return "torso";
}

gaitsim::LimbKind kind_from(const std::string& s) {
  for (auto k : {gaitsim::LimbKind::torso, gaitsim::LimbKind::head, gaitsim::LimbKind::thigh, gaitsim::LimbKind::foot,
                 gaitsim::LimbKind::arm}) {
    if (s == kind_name(k)) return k;
  }
  throw IoError("unknown limb kind '" + s + "'");
}

const char* side_name(gaitsim::Side s) {
  return s == gaitsim::Side::left ? "left" : s == gaitsim::Side::right ? "right" : "center";
}

gaitsim::Side side_from(const std::string& s) {
  if (s == "left") return gaitsim::Side::left;
  if (s == "right") return gaitsim::Side::right;
  if (s == "center") return gaitsim::Side::center;
  throw IoError("unknown side '" + s + "'");
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::istringstream in(io::read_text_file(path));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

json parse(const std::string& text, const fs::path& where) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(where.string() + ": " + e.what());
  }
}

std::vector<CaptureInfo> read_capture_list(const fs::path& dir) {
  std::vector<CaptureInfo> out;
  for (const auto& line : read_lines(dir / "captures.jsonl")) out.push_back(capture_from_json(line));
  return out;
}

void write_capture_list(const fs::path& dir, const std::vector<CaptureInfo>& caps, const gaitsim::RadarConfig& radar) {
  std::string text;
  for (const auto& c : caps) text += capture_to_json(c, radar);
  io::write_text_file(dir / "captures.jsonl", text);
}

PipelineConfig dir_config(const fs::path& dir) {
  if (!fs::exists(dir / "config.json")) throw IoError(dir.string() + " holds no config.json");
  return load_config((dir / "config.json").string());
}

void prepare(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());
}

radardsp::SpectrogramPair spectra_for(const CaptureInfo& c, const fs::path& cube_dir, const PipelineConfig& cfg) {
  const fs::path cube = cube_dir / (c.source + ".rten");
  if (!cube_dir.empty() && fs::exists(cube)) {
    const auto raw = read_raw_cube(cube, cfg.radar);
    return compute_spectra(raw, cfg);
  }
  auto motion = std::make_shared<gaitsim::WalkingSubject>(c.model, c.scenario);
  gaitsim::SyntheticSource src(motion, cfg.radar, c.seed);
  return compute_spectra(src, cfg);
}

metricnet::SliceSet slice_all(const std::vector<CaptureInfo>& caps,
                              const std::function<radardsp::SpectrogramPair(const CaptureInfo&)>& spectra,
                              const PipelineConfig& cfg, const Progress& log) {
  metricnet::SliceSet set;
  set.h = cfg.slicer.out_h;
  set.w = cfg.slicer.out_w;
  slicer::SliceStats total;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const auto& c = caps[i];
    const auto pair = spectra(c);
    const auto r = slicer::slice_capture(pair, c.subject_id, c.source, cfg.slicer);
    set.add_capture(c.source, c.subject_id, c.seconds());
    set.append(r.slices);
    total.emitted += r.stats.emitted;
    total.skipped_duration += r.stats.skipped_duration;
    total.skipped_degenerate += r.stats.skipped_degenerate;
    say(log, "[" + std::to_string(i + 1) + "/" + std::to_string(caps.size()) + "] " + c.source + ": " +
                 std::to_string(r.slices.size()) + " slices");
  }
  say(log, "slices " + std::to_string(total.emitted) + ", skipped for duration " +
               std::to_string(total.skipped_duration) + ", degenerate " + std::to_string(total.skipped_degenerate));
  return set;
}

}  // namespace

std::vector<CaptureInfo> plan_captures(const PipelineConfig& cfg) {
  std::vector<CaptureInfo> out;
  for (const auto& m : gaitsim::standard_cohort(cfg.cohort.n_subjects, cfg.cohort.minutes, cfg.cohort.seed)) {
    for (std::size_t k = 0; k < m.scenarios.size(); ++k) {
      CaptureInfo c;
      char name[32];
      std::snprintf(name, sizeof name, "s%02d_w%03zu", m.model.subject_id, k);
      c.source = name;
      c.subject_id = m.model.subject_id;
      c.scenario_index = k;
      c.seed = gaitsim::capture_seed(cfg.cohort.seed, m.model.subject_id, k);
      c.model = m.model;
      c.scenario = m.scenarios[k];
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::string capture_to_json(const CaptureInfo& c, const gaitsim::RadarConfig& radar) {
  json scat = json::array();
  for (const auto& s : c.model.scatterers) {
    scat.push_back({{"name", s.name},
                    {"kind", kind_name(s.kind)},
                    {"side", side_name(s.side)},
                    {"attach_forward", s.attach_forward},
                    {"attach_height", s.attach_height},
                    {"pivot_length", s.pivot_length},
                    {"swing_amplitude", s.swing_amplitude},
                    {"swing_phase", s.swing_phase},
                    {"rcs", s.rcs}});
  }
  const auto& w = c.scenario;
  PipelineConfig holder;
  holder.radar = radar;
  const json full = json::parse(config_to_json(holder));
  json j = {{"source", c.source},
            {"subject_id", c.subject_id},
            {"scenario_index", c.scenario_index},
            {"seed", c.seed},
            {"seconds", c.seconds()},
            {"subject",
             {{"gait_frequency", c.model.gait_frequency},
              {"walking_speed", c.model.walking_speed},
              {"torso_height", c.model.torso_height},
              {"scatterers", scat}}},
            {"scenario",
             {{"aspect_angle", w.aspect_angle},
              {"start_range", w.start_range},
              {"radial_length", w.radial_length},
              {"duration", w.duration},
              {"direction", gaitsim::to_string(w.direction)},
              {"sensor_height", w.sensor_height},
              {"speed_factor", w.speed_factor},
              {"cadence_factor", w.cadence_factor},
              {"gait_phase", w.gait_phase},
              {"leg_swing_factor", w.leg_swing_factor},
              {"arm_swing_factor", w.arm_swing_factor}}},
            {"config", full.at("radar")}};
  return j.dump() + "\n";
}

CaptureInfo capture_from_json(const std::string& text) {
  const json j = parse(text, "capture sidecar");
  try {
    CaptureInfo c;
    c.source = j.at("source").get<std::string>();
    c.subject_id = j.at("subject_id").get<int>();
    c.scenario_index = j.at("scenario_index").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const auto& s = j.at("subject");
    c.model.subject_id = c.subject_id;
    c.model.gait_frequency = s.at("gait_frequency").get<double>();
    c.model.walking_speed = s.at("walking_speed").get<double>();
    c.model.torso_height = s.at("torso_height").get<double>();
    for (const auto& x : s.at("scatterers")) {
      gaitsim::Scatterer q;
      q.name = x.at("name").get<std::string>();
      q.kind = kind_from(x.at("kind").get<std::string>());
      q.side = side_from(x.at("side").get<std::string>());
      q.attach_forward = x.at("attach_forward").get<double>();
      q.attach_height = x.at("attach_height").get<double>();
      q.pivot_length = x.at("pivot_length").get<double>();
      q.swing_amplitude = x.at("swing_amplitude").get<double>();
      q.swing_phase = x.at("swing_phase").get<double>();
      q.rcs = x.at("rcs").get<double>();
      c.model.scatterers.push_back(q);
    }
    const auto& w = j.at("scenario");
    auto& sc = c.scenario;
    sc.aspect_angle = w.at("aspect_angle").get<double>();
    sc.start_range = w.at("start_range").get<double>();
    sc.radial_length = w.at("radial_length").get<double>();
    sc.duration = w.at("duration").get<double>();
    sc.direction = gaitsim::direction_from_string(w.at("direction").get<std::string>());
    sc.sensor_height = w.at("sensor_height").get<double>();
    sc.speed_factor = w.at("speed_factor").get<double>();
    sc.cadence_factor = w.at("cadence_factor").get<double>();
    sc.gait_phase = w.at("gait_phase").get<double>();
    sc.leg_swing_factor = w.at("leg_swing_factor").get<double>();
    sc.arm_swing_factor = w.at("arm_swing_factor").get<double>();
    return c;
  } catch (const json::exception& e) {
    throw IoError(std::string("capture sidecar: ") + e.what());
  }
}

void write_raw_cube(const fs::path& path, const gaitsim::RawCube& cube) {
  const auto& s = cube.samples();
  std::vector<float> flat(2 * s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    flat[2 * i] = s[i].real();
    flat[2 * i + 1] = s[i].imag();
  }
  const std::uint64_t dims[4] = {cube.n_chirps(), static_cast<std::uint64_t>(cube.n_channels()),
                                 static_cast<std::uint64_t>(cube.n_samples()), 2};
  io::write_rten<float>(path, flat, dims);
}

gaitsim::RawCube read_raw_cube(const fs::path& path, const gaitsim::RadarConfig& radar) {
  const auto t = io::read_rten<float>(path);
  if (t.dims.size() != 4 || t.dims[1] != static_cast<std::uint64_t>(radar.n_virtual()) ||
      t.dims[2] != static_cast<std::uint64_t>(radar.samples_per_chirp) || t.dims[3] != 2) {
    throw IoError(path.string() + ": cube shape does not match the radar configuration");
  }
  gaitsim::RawCube cube(radar, t.dims[0]);
  auto& s = cube.samples();
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = {t.values[2 * i], t.values[2 * i + 1]};
  return cube;
}

radardsp::SpectrogramPair compute_spectra(const gaitsim::ChirpSource& src, const PipelineConfig& cfg, Exec exec) {
  return radardsp::synchronize(radardsp::micro_doppler(src, cfg.stft, exec),
                               radardsp::micro_omega(src, cfg.stft, cfg.omega, exec));
}

void write_spectrogram(const fs::path& dir, const std::string& stem, const radardsp::MicroMotionSpectrogram& s) {
  const std::uint64_t dims[2] = {s.n_freq, s.n_time};
  io::write_rten<float>(dir / (stem + ".rten"), s.values, dims);
  json meta = {{"kind", radardsp::to_string(s.kind)}, {"f_min", s.f_min()},       {"f_max", s.f_max()},
               {"t0", s.t0},                          {"hop_s", s.hop_s},         {"n_freq", s.n_freq},
               {"n_time", s.n_time},                  {"freq_axis", s.freq_axis}, {"dynamic_range_db", s.dynamic_range_db}};
  io::write_text_file(dir / (stem + ".json"), meta.dump(2) + "\n");
}

radardsp::MicroMotionSpectrogram read_spectrogram(const fs::path& dir, const std::string& stem) {
  const json meta = parse(io::read_text_file(dir / (stem + ".json")), dir / (stem + ".json"));
  const auto t = io::read_rten<float>(dir / (stem + ".rten"));
  radardsp::MicroMotionSpectrogram s;
  try {
    s.kind = radardsp::spectrogram_kind_from_string(meta.at("kind").get<std::string>());
    s.n_freq = meta.at("n_freq").get<std::size_t>();
    s.n_time = meta.at("n_time").get<std::size_t>();
    s.freq_axis = meta.at("freq_axis").get<std::vector<double>>();
    s.t0 = meta.at("t0").get<double>();
    s.hop_s = meta.at("hop_s").get<double>();
    s.dynamic_range_db = meta.at("dynamic_range_db").get<double>();
  } catch (const json::exception& e) {
    throw IoError(stem + ".json: " + e.what());
  } catch (const ValidationError& e) {
    throw IoError(stem + ".json: " + e.what());
  }
  if (t.dims.size() != 2 || t.dims[0] != s.n_freq || t.dims[1] != s.n_time || s.freq_axis.size() != s.n_freq) {
    throw IoError(stem + ": tensor shape disagrees with its metadata");
  }
  s.values = t.values;
  return s;
}

void write_slices(const fs::path& dir, const metricnet::SliceSet& set) {
  prepare(dir);
  const std::uint64_t dims[3] = {set.size(), static_cast<std::uint64_t>(set.h), static_cast<std::uint64_t>(set.w)};
  io::write_rten<float>(dir / "ud.rten", set.ud, dims);
  io::write_rten<float>(dir / "uw.rten", set.uw, dims);
  std::string manifest;
  for (std::size_t i = 0; i < set.size(); ++i) {
    json j = {{"index", i},
              {"subject_id", set.labels[i]},
              {"direction", gaitsim::to_string(set.directions[i])},
              {"t_start", set.t_start[i]},
              {"t_end", set.t_end[i]},
              {"source", set.sources[static_cast<std::size_t>(set.capture[i])]}};
    manifest += j.dump() + "\n";
  }
  io::write_text_file(dir / "manifest.jsonl", manifest);
  std::string sources;
  for (std::size_t c = 0; c < set.sources.size(); ++c) {
    json j = {{"source", set.sources[c]}, {"subject_id", set.capture_subject[c]}, {"seconds", set.capture_seconds[c]}};
    sources += j.dump() + "\n";
  }
  io::write_text_file(dir / "sources.jsonl", sources);
}

metricnet::SliceSet read_slices(const fs::path& dir) {
  for (const char* f : {"ud.rten", "uw.rten", "manifest.jsonl", "sources.jsonl"}) {
    if (!fs::exists(dir / f)) throw IoError(dir.string() + " is not a dataset (missing " + f + ")");
  }
  metricnet::SliceSet set;
  try {
    for (const auto& line : read_lines(dir / "sources.jsonl")) {
      const json j = parse(line, dir / "sources.jsonl");
      set.add_capture(j.at("source").get<std::string>(), j.at("subject_id").get<int>(), j.at("seconds").get<double>());
    }
    std::map<std::string, int> index;
    for (std::size_t c = 0; c < set.sources.size(); ++c) index[set.sources[c]] = static_cast<int>(c);
    for (const auto& line : read_lines(dir / "manifest.jsonl")) {
      const json j = parse(line, dir / "manifest.jsonl");
      const auto src = j.at("source").get<std::string>();
      auto it = index.find(src);
      if (it == index.end()) throw IoError("manifest names unknown source '" + src + "'");
      set.labels.push_back(j.at("subject_id").get<int>());
      set.directions.push_back(gaitsim::direction_from_string(j.at("direction").get<std::string>()));
      set.t_start.push_back(j.at("t_start").get<double>());
      set.t_end.push_back(j.at("t_end").get<double>());
      set.capture.push_back(it->second);
    }
  } catch (const json::exception& e) {
    throw IoError(dir.string() + ": " + e.what());
  }
  auto ud = io::read_rten<float>(dir / "ud.rten");
  auto uw = io::read_rten<float>(dir / "uw.rten");
  if (ud.dims.size() != 3 || ud.dims != uw.dims || ud.dims[0] != set.size()) {
    throw IoError(dir.string() + ": slice tensors disagree with the manifest");
  }
  set.h = static_cast<int>(ud.dims[1]);
  set.w = static_cast<int>(ud.dims[2]);
  set.ud = std::move(ud.values);
  set.uw = std::move(uw.values);
  return set;
}

std::vector<evalbench::CaptureSpectra> read_all_spectra(const fs::path& dir) {
  const fs::path sd = dir / "spectrograms";
  if (!fs::exists(sd)) throw IoError(dir.string() + " holds no spectrograms/ directory");
  std::vector<evalbench::CaptureSpectra> out;
  for (const auto& c : read_capture_list(dir)) {
    evalbench::CaptureSpectra s;
    s.pair.ud = read_spectrogram(sd, c.source + ".ud");
    s.pair.uw = read_spectrogram(sd, c.source + ".uw");
    s.subject = c.subject_id;
    s.source = c.source;
    s.seconds = c.seconds();
    out.push_back(std::move(s));
  }
  return out;
}

void cmd_simulate(const PipelineConfig& cfg, const fs::path& out, const Progress& log) {
  cfg.validate();
  prepare(out / "captures");
  io::write_text_file(out / "config.json", config_to_json(cfg));
  const auto caps = plan_captures(cfg);
  std::size_t cubes = 0;
  for (const auto& c : caps) {
    io::write_text_file(out / "captures" / (c.source + ".json"), capture_to_json(c, cfg.radar));
    if (gaitsim::chirp_count(c.seconds(), cfg.radar) <= cfg.radar.chirp_budget) {
      write_raw_cube(out / "captures" / (c.source + ".rten"),
                     gaitsim::simulate_capture(c.model, c.scenario, cfg.radar, c.seed));
      ++cubes;
    }
  }
  write_capture_list(out, caps, cfg.radar);
  say(log, std::to_string(caps.size()) + " captures planned, " + std::to_string(cubes) +
               " materialised within the chirp budget; the rest are regenerated from their sidecars");
}

void cmd_spectrogram(const fs::path& in, const fs::path& out, const Progress& log) {
  const auto cfg = dir_config(in);
  const auto caps = read_capture_list(in);
  prepare(out / "spectrograms");
  if (fs::absolute(in) != fs::absolute(out)) {
    io::write_text_file(out / "config.json", config_to_json(cfg));
    write_capture_list(out, caps, cfg.radar);
  }
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const auto pair = spectra_for(caps[i], in / "captures", cfg);
    write_spectrogram(out / "spectrograms", caps[i].source + ".ud", pair.ud);
    write_spectrogram(out / "spectrograms", caps[i].source + ".uw", pair.uw);
    say(log, "[" + std::to_string(i + 1) + "/" + std::to_string(caps.size()) + "] " + caps[i].source + ": " +
                 std::to_string(pair.ud.n_time) + " columns");
  }
}

void cmd_slice(const fs::path& in, const fs::path& out, const Progress& log) {
  const auto cfg = dir_config(in);
  const auto caps = read_capture_list(in);
  const auto set = slice_all(
      caps,
      [&](const CaptureInfo& c) {
        return radardsp::SpectrogramPair{read_spectrogram(in / "spectrograms", c.source + ".ud"),
                                         read_spectrogram(in / "spectrograms", c.source + ".uw")};
      },
      cfg, log);
  prepare(out);
  if (fs::absolute(in) != fs::absolute(out)) {
    io::write_text_file(out / "config.json", config_to_json(cfg));
    write_capture_list(out, caps, cfg.radar);
  }
  write_slices(out, set);
}

void cmd_dataset_build(const PipelineConfig& cfg, const fs::path& out, const Progress& log) {
  cfg.validate();
  prepare(out / "spectrograms");
  io::write_text_file(out / "config.json", config_to_json(cfg));
  const auto caps = plan_captures(cfg);
  write_capture_list(out, caps, cfg.radar);
  const auto set = slice_all(
      caps,
      [&](const CaptureInfo& c) {
        auto pair = spectra_for(c, {}, cfg);
        write_spectrogram(out / "spectrograms", c.source + ".ud", pair.ud);
        write_spectrogram(out / "spectrograms", c.source + ".uw", pair.uw);
        return pair;
      },
      cfg, log);
  write_slices(out, set);
}

void cmd_train(const fs::path& dataset, const PipelineConfig& cfg, const fs::path& out, const Progress& log) {
  cfg.validate();
  const auto set = read_slices(dataset);
  auto tc = cfg.net.train;
  require(set.h == tc.encoder.input_h && set.w == tc.encoder.input_w, "slicer.out_size",
          "dataset slices are " + std::to_string(set.h) + "x" + std::to_string(set.w));
  const auto split = metricnet::split_by_capture(set, cfg.eval.train_fraction, cfg.net.seed);
  const auto tr = set.subset(split.train);
  const auto va = set.subset(split.held_out);
  say(log, "training on " + std::to_string(tr.size()) + " slices, validating on " + std::to_string(va.size()));
  auto r = metricnet::train(tr, va.size() ? &va : nullptr, tc, cfg.net.seed, [&](const metricnet::EpochLoss& e) {
    char line[96];
    std::snprintf(line, sizeof line, "epoch %d: train %.4f  val %.4f", e.epoch, e.train_loss, e.val_loss);
    say(log, line);
  });
  metricnet::save_checkpoint(out, r.encoder, tc, r.history);
  if (va.size()) {
    const auto ztr = metricnet::embed(r.encoder, tr, tc.mode, tc.exec);
    const auto zva = metricnet::embed(r.encoder, va, tc.mode, tc.exec);
    const double err = evalbench::error_rate(evalbench::centroid_classify(ztr, tr.labels, zva), va.labels);
    say(log, "held-out nearest-centroid error " + std::to_string(err));
  }
}

void cmd_eval(const fs::path& dataset, const fs::path& checkpoint, const std::vector<std::string>& experiments,
              const PipelineConfig& cfg, const fs::path& out, const Progress& log) {
  cfg.validate();
  evalbench::EvalConfig ec;
  ec.train = cfg.net.train;
  if (!checkpoint.empty()) {
    auto ck = metricnet::load_checkpoint(checkpoint);
    ec.train = ck.config;
    ec.train.exec = cfg.net.train.exec;
  }
  ec.train_fraction = cfg.eval.train_fraction;
  ec.seeds = cfg.eval.seeds;
  ec.progress = log;
  const auto kinds = experiments.empty() ? cfg.eval.experiments : experiments;
  static const std::set<std::string> known = {"constellation", "complexity", "size", "window"};
  for (const auto& k : kinds) require(known.count(k) > 0, "experiment", "unknown experiment '" + k + "'");
  const auto set = read_slices(dataset);
  prepare(out);
  for (const auto& k : kinds) {
    evalbench::ExperimentReport rep;
    if (k == "constellation") {
      rep = evalbench::run_constellation(set, ec);
    } else if (k == "complexity") {
      std::vector<int> counts;
      const int n = static_cast<int>(set.distinct_labels().size());
      for (int c : cfg.eval.class_counts) {
        if (c <= n) counts.push_back(c);
        else say(log, "skipping class count " + std::to_string(c) + ": dataset has " + std::to_string(n) + " subjects");
      }
      rep = evalbench::run_complexity(set, counts, ec);
    } else if (k == "size") {
      rep = evalbench::run_size(set, cfg.eval.minutes, ec);
    } else {
      rep = evalbench::run_window(read_all_spectra(dataset), cfg.eval.windows_s, cfg.slicer, ec);
    }
    evalbench::write_report(out, rep);
    for (const auto& row : rep.rows) {
      char line[160];
      std::snprintf(line, sizeof line, "%s %-16s error %.4f +- %.4f", k.c_str(), row.condition.c_str(), row.mean,
                    row.stdev);
      say(log, line);
    }
  }
}

void cmd_embed(const fs::path& dataset, const fs::path& checkpoint, const fs::path& out_csv, const Progress& log) {
  auto ck = metricnet::load_checkpoint(checkpoint);
  const auto set = read_slices(dataset);
  const auto z = metricnet::embed(ck.encoder, set, ck.config.mode, ck.config.exec);
  if (out_csv.has_parent_path()) prepare(out_csv.parent_path());
  evalbench::export_embeddings(out_csv, z, set.labels, set.directions);
  const auto pca = evalbench::pca2d(std::vector<double>(z.data.begin(), z.data.end()), z.dim(0), z.dim(1));
  char line[128];
  std::snprintf(line, sizeof line, "%zu embeddings written; top-2 PCA variances %.4g, %.4g", set.size(),
                pca.variance[0], pca.variance[1]);
  say(log, line);
}

}  // namespace gaitid::cli
