#include "gaitid/cli/config.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "gaitid/core/error.hpp"
#include "gaitid/io/rten.hpp"
#include "json.hpp"

namespace gaitid::cli {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were consumed so that the
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    require(j_.is_object(), path_.empty() ? "config" : path_, "expected an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  template <class T>
  void get(const std::string& k, T& out) {
    seen_.insert(k);
    auto it = j_.find(k);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ValidationError(key(k), "wrong type");
    }
  }

  // null stands for +inf.
  void get_inf(const std::string& k, double& out) {
    seen_.insert(k);
    auto it = j_.find(k);
    if (it == j_.end()) return;
    if (it->is_null()) {
      out = std::numeric_limits<double>::infinity();
      return;
    }
    require(it->is_number(), key(k), "expected a number or null");
    out = it->get<double>();
  }

  Section sub(const std::string& k) {
    seen_.insert(k);
    auto it = j_.find(k);
    static const json empty = json::object();
    return Section(it == j_.end() ? empty : *it, key(k));
  }

  bool has(const std::string& k) const { return j_.contains(k); }
  const json* raw(const std::string& k) {
    seen_.insert(k);
    auto it = j_.find(k);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ValidationError(key(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json inf_or(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

std::string axis_name(gaitsim::ArrayAxis a) { return a == gaitsim::ArrayAxis::azimuth ? "azimuth" : "elevation"; }

json to_json_obj(const PipelineConfig& c) {
  const auto& r = c.radar;
  json radar = {{"carrier_hz", r.carrier_hz},
                {"bandwidth_hz", r.bandwidth_hz},
                {"chirp_s", r.chirp_s},
                {"samples_per_chirp", r.samples_per_chirp},
                {"chirps_per_window", r.chirps_per_window},
                {"n_tx", r.n_tx},
                {"n_rx", r.n_rx},
                {"element_spacing_m", r.element_spacing_m ? json(*r.element_spacing_m) : json(nullptr)},
                {"noise_snr_db", inf_or(r.noise_snr_db)},
                {"array_axis", axis_name(r.array_axis)},
                {"chirp_budget", r.chirp_budget}};
  json cohort = {{"n_subjects", c.cohort.n_subjects}, {"minutes", c.cohort.minutes}, {"seed", c.cohort.seed}};
  const auto& s = c.stft;
  const auto& o = c.omega;
  json dsp = {{"window_chirps", s.window_chirps},
              {"hop_chirps", s.hop_chirps},
              {"taper", radardsp::to_string(s.taper)},
              {"range_taper", radardsp::to_string(s.range_taper)},
              {"gate_threshold", s.gate_threshold},
              {"notch_velocity", s.notch_velocity},
              {"max_velocity", s.max_velocity},
              {"dynamic_range_db", s.dynamic_range_db},
              {"omega",
               {{"window_s", o.window_s},
                {"omega_max", o.omega_max},
                {"n_omega_bins", o.n_omega_bins},
                {"angle_padding", o.beam.padding},
                {"angle_taper", radardsp::to_string(o.beam.taper)},
                {"gate_threshold", o.gate_threshold},
                {"dynamic_range_db", o.dynamic_range_db},
                {"remove_floor", o.remove_floor}}}};
  const auto& p = c.slicer;
  json slicer = {{"threshold", p.threshold},
                 {"kernel", {p.kernel_h, p.kernel_w}},
                 {"smooth_columns", p.smooth_columns},
                 {"min_sep_s", p.min_sep_s},
                 {"prominence", p.prominence},
                 {"out_size", {p.out_h, p.out_w}},
                 {"min_duration_s", p.min_duration_s},
                 {"max_duration_s", p.max_duration_s}};
  const auto& t = c.net.train;
  json net = {{"mode", metricnet::to_string(t.mode)},
              {"encoder", {{"stage_channels", t.encoder.stage_channels}, {"embedding_dim", t.encoder.embedding_dim}}},
              {"triplet",
               {{"margin", t.triplet.margin}, {"P", t.triplet.classes_per_batch}, {"K", t.triplet.samples_per_class}}},
              {"optimizer", {{"lr", t.adam.lr}, {"beta1", t.adam.beta1}, {"beta2", t.adam.beta2}, {"eps", t.adam.eps}}},
              {"epochs", t.epochs},
              {"batches_per_epoch", t.batches_per_epoch},
              {"seed", c.net.seed}};
  const auto& e = c.eval;
  json eval = {{"experiments", e.experiments},   {"seeds", e.seeds},     {"train_fraction", e.train_fraction},
               {"class_counts", e.class_counts}, {"minutes", e.minutes}, {"windows_s", e.windows_s}};
  return {{"radar", radar}, {"cohort", cohort}, {"dsp", dsp}, {"slicer", slicer}, {"net", net}, {"eval", eval}};
}

template <class F>
void with_string(Section& s, const std::string& k, F&& apply) {
  std::string v;
  s.get(k, v);
  if (v.empty()) return;
  try {
    apply(v);
  } catch (const std::exception& ex) {
    throw ValidationError(s.key(k), ex.what());
  }
}

void pair_of_ints(Section& s, const std::string& k, int& a, int& b) {
  std::vector<int> v{a, b};
  s.get(k, v);
  require(v.size() == 2, s.key(k), "expected two integers");
  a = v[0];
  b = v[1];
}

// Module validators already report full config paths; anything else is
// placed under the section being checked.
template <class F>
void validated(const std::string& prefix, F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    const std::string& k = e.key();
    const std::string top = prefix.substr(0, prefix.find('.'));
    if (k.rfind(top + ".", 0) == 0) throw;
    std::string what = e.what();
    if (!k.empty() && what.rfind(k + ": ", 0) == 0) what = what.substr(k.size() + 2);
    throw ValidationError(k.empty() ? prefix : prefix + "." + k, what);
  }
}

}  // namespace

void PipelineConfig::validate() const {
  validated("radar", [&] { radar.validate(); });
  require(cohort.n_subjects >= 2 && cohort.n_subjects <= 32, "cohort.n_subjects", "must lie in [2, 32]");
  require(cohort.minutes > 0, "cohort.minutes", "must be positive");
  validated("dsp", [&] { stft.validate(); });
  validated("dsp.omega", [&] { omega.validate(); });
  validated("slicer", [&] { slicer.validate(); });
  validated("net", [&] { net.train.validate(); });
  require(net.train.encoder.input_h == slicer.out_h && net.train.encoder.input_w == slicer.out_w, "slicer.out_size",
          "must match the encoder input size");
  static const std::set<std::string> kinds = {"constellation", "complexity", "size", "window"};
  for (const auto& k : eval.experiments) require(kinds.count(k) > 0, "eval.experiments", "unknown experiment '" + k + "'");
  require(!eval.seeds.empty(), "eval.seeds", "at least one seed is required");
  require(eval.train_fraction > 0 && eval.train_fraction < 1, "eval.train_fraction", "must lie in (0, 1)");
  for (int n : eval.class_counts) require(n >= 2, "eval.class_counts", "counts must be >= 2");
  for (double m : eval.minutes) require(m > 0, "eval.minutes", "must be positive");
  for (double w : eval.windows_s) require(w > 0, "eval.windows_s", "must be positive");
}

bool operator==(const PipelineConfig& a, const PipelineConfig& b) { return to_json_obj(a) == to_json_obj(b); }

std::string config_to_json(const PipelineConfig& c) { return to_json_obj(c).dump(2) + "\n"; }

PipelineConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError("config", std::string("malformed JSON: ") + e.what());
  }
  PipelineConfig c;
  Section root(j, "");
  {
    auto s = root.sub("radar");
    auto& r = c.radar;
    s.get("carrier_hz", r.carrier_hz);
    s.get("bandwidth_hz", r.bandwidth_hz);
    s.get("chirp_s", r.chirp_s);
    s.get("samples_per_chirp", r.samples_per_chirp);
    s.get("chirps_per_window", r.chirps_per_window);
    s.get("n_tx", r.n_tx);
    s.get("n_rx", r.n_rx);
    if (const json* d = s.raw("element_spacing_m"); d && !d->is_null()) {
      require(d->is_number(), "radar.element_spacing_m", "expected a number or null");
      r.element_spacing_m = d->get<double>();
    }
    s.get_inf("noise_snr_db", r.noise_snr_db);
    with_string(s, "array_axis", [&](const std::string& v) {
      if (v == "elevation") r.array_axis = gaitsim::ArrayAxis::elevation;
      else if (v == "azimuth") r.array_axis = gaitsim::ArrayAxis::azimuth;
      else throw std::invalid_argument("expected 'elevation' or 'azimuth'");
    });
    s.get("chirp_budget", r.chirp_budget);
    s.finish();
  }
  {
    auto s = root.sub("cohort");
    s.get("n_subjects", c.cohort.n_subjects);
    s.get("minutes", c.cohort.minutes);
    s.get("seed", c.cohort.seed);
    s.finish();
  }
  {
    auto s = root.sub("dsp");
    auto& p = c.stft;
    s.get("window_chirps", p.window_chirps);
    s.get("hop_chirps", p.hop_chirps);
    with_string(s, "taper", [&](const std::string& v) { p.taper = radardsp::taper_from_string(v); });
    with_string(s, "range_taper", [&](const std::string& v) { p.range_taper = radardsp::taper_from_string(v); });
    s.get("gate_threshold", p.gate_threshold);
    s.get("notch_velocity", p.notch_velocity);
    s.get("max_velocity", p.max_velocity);
    s.get("dynamic_range_db", p.dynamic_range_db);
    auto o = s.sub("omega");
    auto& q = c.omega;
    o.get("window_s", q.window_s);
    o.get("omega_max", q.omega_max);
    o.get("n_omega_bins", q.n_omega_bins);
    o.get("angle_padding", q.beam.padding);
    with_string(o, "angle_taper", [&](const std::string& v) { q.beam.taper = radardsp::taper_from_string(v); });
    o.get("gate_threshold", q.gate_threshold);
    o.get("dynamic_range_db", q.dynamic_range_db);
    o.get("remove_floor", q.remove_floor);
    o.finish();
    s.finish();
  }
  {
    auto s = root.sub("slicer");
    auto& p = c.slicer;
    s.get("threshold", p.threshold);
    pair_of_ints(s, "kernel", p.kernel_h, p.kernel_w);
    s.get("smooth_columns", p.smooth_columns);
    s.get("min_sep_s", p.min_sep_s);
    s.get("prominence", p.prominence);
    pair_of_ints(s, "out_size", p.out_h, p.out_w);
    s.get("min_duration_s", p.min_duration_s);
    s.get("max_duration_s", p.max_duration_s);
    s.finish();
  }
  {
    auto s = root.sub("net");
    auto& t = c.net.train;
    with_string(s, "mode", [&](const std::string& v) { t.mode = metricnet::input_mode_from_string(v); });
    auto e = s.sub("encoder");
    e.get("stage_channels", t.encoder.stage_channels);
    e.get("embedding_dim", t.encoder.embedding_dim);
    e.finish();
    auto tr = s.sub("triplet");
    tr.get("margin", t.triplet.margin);
    tr.get("P", t.triplet.classes_per_batch);
    tr.get("K", t.triplet.samples_per_class);
    tr.finish();
    auto op = s.sub("optimizer");
    op.get("lr", t.adam.lr);
    op.get("beta1", t.adam.beta1);
    op.get("beta2", t.adam.beta2);
    op.get("eps", t.adam.eps);
    op.finish();
    s.get("epochs", t.epochs);
    s.get("batches_per_epoch", t.batches_per_epoch);
    s.get("seed", c.net.seed);
    s.finish();
  }
  {
    auto s = root.sub("eval");
    auto& e = c.eval;
    s.get("experiments", e.experiments);
    s.get("seeds", e.seeds);
    s.get("train_fraction", e.train_fraction);
    s.get("class_counts", e.class_counts);
    s.get("minutes", e.minutes);
    s.get("windows_s", e.windows_s);
    s.finish();
  }
  root.finish();
  c.net.train.encoder.input_h = c.slicer.out_h;
  c.net.train.encoder.input_w = c.slicer.out_w;
  c.net.train.encoder.in_channels = metricnet::input_channels(c.net.train.mode);
  c.validate();
  return c;
}

PipelineConfig load_config(const std::string& path) { return config_from_json(io::read_text_file(path)); }

}  // namespace gaitid::cli
