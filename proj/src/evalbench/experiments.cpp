#include "gaitid/evalbench/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "gaitid/core/random.hpp"
#include "gaitid/evalbench/metrics.hpp"
#include "gaitid/io/rten.hpp"
#include "json.hpp"

namespace gaitid::evalbench {

using nlohmann::json;

void EvalConfig::validate() const {
  train.validate();
  require(train_fraction > 0 && train_fraction < 1, "eval.train_fraction", "must lie in (0, 1)");
  require(!seeds.empty(), "eval.seeds", "at least one seed is required");
}

namespace {

void summarize(ConditionResult& r) {
  const auto n = static_cast<double>(r.errors.size());
  double s = 0.0;
  for (double e : r.errors) s += e;
  r.mean = n > 0 ? s / n : 0.0;
  double ss = 0.0;
  for (double e : r.errors) ss += (e - r.mean) * (e - r.mean);
  r.stdev = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
}

void record(ConditionResult& r, const SeedOutcome& o) {
  r.errors.push_back(o.error);
  r.n_train.push_back(o.n_train);
  r.n_test.push_back(o.n_test);
  r.held_out_loss.push_back(o.held_out_loss);
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

void say(const EvalConfig& cfg, const std::string& msg) {
  if (cfg.progress) cfg.progress(msg);
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

SeedOutcome evaluate_split(const SliceSet& data, const metricnet::Split& split, const metricnet::TrainConfig& tc,
                           std::uint64_t seed) {
  require(!split.train.empty() && !split.held_out.empty(), "split", "both sides of the split need slices");
  const SliceSet tr = data.subset(split.train);
  const SliceSet te = data.subset(split.held_out);
  auto result = metricnet::train(tr, nullptr, tc, seed);
  const auto ztr = metricnet::embed(result.encoder, tr, tc.mode, tc.exec);
  const auto zte = metricnet::embed(result.encoder, te, tc.mode, tc.exec);
  return {error_rate(centroid_classify(ztr, tr.labels, zte), te.labels), tr.size(), te.size(),
          metricnet::validation_loss(result.encoder, te, tc, seed)};
}

ExperimentReport run_constellation(const SliceSet& data, const EvalConfig& cfg) {
  cfg.validate();
  Stopwatch clock;
  ExperimentReport rep;
  rep.kind = "constellation";
  rep.axis = "mode";
  rep.mode = "all";
  rep.seeds = cfg.seeds;
  const metricnet::InputMode modes[] = {metricnet::InputMode::ud, metricnet::InputMode::uw,
                                        metricnet::InputMode::concat};
  for (int m = 0; m < 3; ++m) {
    ConditionResult r;
    r.condition = metricnet::to_string(modes[m]);
    r.value = m;
    r.n_samples = data.size();
    rep.rows.push_back(r);
  }
  for (auto seed : cfg.seeds) {
    const auto split = metricnet::split_by_capture(data, cfg.train_fraction, seed);
    for (int m = 0; m < 3; ++m) {
      auto tc = cfg.train;
      tc.mode = modes[m];
      record(rep.rows[m], evaluate_split(data, split, tc, seed));
      say(cfg, "constellation seed " + std::to_string(seed) + " " + rep.rows[m].condition + ": error " +
                   fixed(rep.rows[m].errors.back(), 4));
    }
  }
  for (auto& r : rep.rows) summarize(r);
  if (rep.rows[0].mean > 0) rep.notes["concat_vs_ud_reduction"] = (rep.rows[0].mean - rep.rows[2].mean) / rep.rows[0].mean;
  rep.runtime_s = clock.seconds();
  return rep;
}

ExperimentReport run_complexity(const SliceSet& data, const std::vector<int>& class_counts, const EvalConfig& cfg) {
  cfg.validate();
  Stopwatch clock;
  const auto labels = data.distinct_labels();
  require(!class_counts.empty(), "eval.class_counts", "no class counts given");
  for (int n : class_counts) {
    require(n >= 2 && n <= static_cast<int>(labels.size()), "eval.class_counts",
            "class count " + std::to_string(n) + " outside [2, " + std::to_string(labels.size()) + "]");
  }
  ExperimentReport rep;
  rep.kind = "complexity";
  rep.axis = "n_classes";
  rep.mode = metricnet::to_string(cfg.train.mode);
  rep.seeds = cfg.seeds;
  for (int n : class_counts) {
    ConditionResult r;
    r.condition = std::to_string(n) + " classes";
    r.value = n;
    rep.rows.push_back(r);
  }
  for (auto seed : cfg.seeds) {
    auto order = labels;
    Rng rng(split_seed(seed, 0x43504C58));
    rng.shuffle(order.begin(), order.end());
    for (std::size_t c = 0; c < class_counts.size(); ++c) {
      const std::set<int> keep(order.begin(), order.begin() + class_counts[c]);
      std::vector<int> idx;
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (keep.count(data.labels[i])) idx.push_back(static_cast<int>(i));
      }
      const SliceSet sub = data.subset(idx);
      rep.rows[c].n_samples = sub.size();
      record(rep.rows[c], evaluate_split(sub, metricnet::split_by_capture(sub, cfg.train_fraction, seed), cfg.train, seed));
      say(cfg, "complexity seed " + std::to_string(seed) + " " + rep.rows[c].condition + ": error " +
                   fixed(rep.rows[c].errors.back(), 4));
    }
  }
  for (auto& r : rep.rows) summarize(r);
  rep.runtime_s = clock.seconds();
  return rep;
}

ExperimentReport run_size(const SliceSet& data, const std::vector<double>& minutes, const EvalConfig& cfg) {
  cfg.validate();
  Stopwatch clock;
  require(!minutes.empty(), "eval.minutes", "no training sizes given");
  for (double m : minutes) require(m > 0, "eval.minutes", "training minutes must be positive");
  ExperimentReport rep;
  rep.kind = "size";
  rep.axis = "minutes";
  rep.mode = metricnet::to_string(cfg.train.mode);
  rep.seeds = cfg.seeds;
  for (double m : minutes) {
    ConditionResult r;
    r.condition = fixed(m, 2) + " min";
    r.value = m;
    rep.rows.push_back(r);
  }
  std::vector<double> achieved(minutes.size(), 0.0);
  for (auto seed : cfg.seeds) {
    const auto split = metricnet::split_by_capture(data, cfg.train_fraction, seed);
    std::map<int, std::vector<int>> caps;  // subject -> training captures
    for (int i : split.train) {
      const int c = data.capture[static_cast<std::size_t>(i)];
      auto& v = caps[data.labels[static_cast<std::size_t>(i)]];
      if (std::find(v.begin(), v.end(), c) == v.end()) v.push_back(c);
    }
    Rng rng(split_seed(seed, 0x53495A45));
    for (auto& [subject, v] : caps) {
      std::sort(v.begin(), v.end());
      rng.shuffle(v.begin(), v.end());
    }
    for (std::size_t m = 0; m < minutes.size(); ++m) {
      std::set<int> chosen;
      double total = 0.0;
      for (const auto& [subject, v] : caps) {
        double secs = 0.0;
        for (int c : v) {
          if (secs >= minutes[m] * 60.0 - 1e-9) break;
          const double d = data.capture_seconds[static_cast<std::size_t>(c)];
          require(d > 0, "captures", "capture " + data.sources[static_cast<std::size_t>(c)] + " has no duration");
          secs += d;
          chosen.insert(c);
        }
        total += secs;
      }
      achieved[m] += total / 60.0 / static_cast<double>(caps.size());
      metricnet::Split sub;
      sub.held_out = split.held_out;
      for (int i : split.train) {
        if (chosen.count(data.capture[static_cast<std::size_t>(i)])) sub.train.push_back(i);
      }
      rep.rows[m].n_samples = sub.train.size() + sub.held_out.size();
      record(rep.rows[m], evaluate_split(data, sub, cfg.train, seed));
      say(cfg, "size seed " + std::to_string(seed) + " " + rep.rows[m].condition + ": error " +
                   fixed(rep.rows[m].errors.back(), 4));
    }
  }
  for (std::size_t m = 0; m < minutes.size(); ++m) {
    summarize(rep.rows[m]);
    rep.notes["achieved_minutes_" + fixed(minutes[m], 2)] = achieved[m] / static_cast<double>(cfg.seeds.size());
  }
  rep.runtime_s = clock.seconds();
  return rep;
}

std::vector<slicer::GaitSlice> fixed_window_slices(const CaptureSpectra& capture, double window_s, std::size_t count,
                                                   const slicer::SlicerParams& p) {
  const auto& ud = capture.pair.ud;
  require(window_s > 0 && ud.hop_s > 0, "window_s", "must be positive");
  const auto w = static_cast<std::size_t>(std::lround(window_s / ud.hop_s));
  if (count == 0 || ud.n_time < w + 1) return {};
  const std::size_t room = ud.n_time - 1 - w;
  slicer::SlicerParams q = p;
  q.min_duration_s = std::max(1e-3, w * ud.hop_s - 0.5 * ud.hop_s);
  q.max_duration_s = w * ud.hop_s + 0.5 * ud.hop_s;
  const auto env = slicer::envelopes_and_cog(ud, slicer::binarize_and_close(ud, p.threshold, p.kernel_h, p.kernel_w));
  std::vector<slicer::GaitSlice> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t c0 =
        count == 1 ? room / 2
                   : static_cast<std::size_t>(std::lround(static_cast<double>(i * room) / static_cast<double>(count - 1)));
    const std::size_t bounds[2] = {c0, c0 + w};
    auto s = slicer::extract_slices(capture.pair, env, bounds, q);
    for (auto& x : s) {
      x.subject_id = capture.subject;
      x.source = capture.source;
      out.push_back(std::move(x));
    }
  }
  return out;
}

ExperimentReport run_window(const std::vector<CaptureSpectra>& captures, const std::vector<double>& windows_s,
                            const slicer::SlicerParams& sp, const EvalConfig& cfg) {
  cfg.validate();
  Stopwatch clock;
  ExperimentReport rep;
  rep.kind = "window";
  rep.axis = "window_s";
  rep.mode = metricnet::to_string(cfg.train.mode);
  rep.seeds = cfg.seeds;

  std::vector<SliceSet> sets(windows_s.size() + 1);
  std::vector<std::size_t> counts;
  for (const auto& c : captures) {
    auto r = slicer::slice_capture(c.pair, c.subject, c.source, sp);
    counts.push_back(r.slices.size());
    sets[0].add_capture(c.source, c.subject, c.seconds);
    sets[0].append(r.slices);
  }
  ConditionResult adaptive;
  adaptive.condition = "adaptive";
  adaptive.value = 0.0;
  adaptive.n_samples = sets[0].size();
  rep.rows.push_back(adaptive);
  for (std::size_t k = 0; k < windows_s.size(); ++k) {
    std::size_t dropped = 0;
    for (std::size_t c = 0; c < captures.size(); ++c) {
      sets[k + 1].add_capture(captures[c].source, captures[c].subject, captures[c].seconds);
      const auto s = fixed_window_slices(captures[c], windows_s[k], counts[c], sp);
      if (s.size() < counts[c]) ++dropped;
      sets[k + 1].append(s);
    }
    ConditionResult r;
    r.condition = "fixed " + fixed(windows_s[k], 2) + " s";
    r.value = windows_s[k];
    r.n_samples = sets[k + 1].size();
    rep.rows.push_back(r);
    rep.notes["short_captures_" + fixed(windows_s[k], 2)] = static_cast<double>(dropped);
    if (adaptive.n_samples > 0) {
      rep.notes["count_ratio_" + fixed(windows_s[k], 2)] =
          static_cast<double>(r.n_samples) / static_cast<double>(adaptive.n_samples);
    }
  }
  for (auto seed : cfg.seeds) {
    for (std::size_t k = 0; k < sets.size(); ++k) {
      const auto split = metricnet::split_by_capture(sets[k], cfg.train_fraction, seed);
      record(rep.rows[k], evaluate_split(sets[k], split, cfg.train, seed));
      say(cfg, "window seed " + std::to_string(seed) + " " + rep.rows[k].condition + ": error " +
                   fixed(rep.rows[k].errors.back(), 4));
    }
  }
  for (auto& r : rep.rows) summarize(r);
  rep.runtime_s = clock.seconds();
  return rep;
}

namespace {

// NaN has no JSON spelling; it travels as null.
json nullable(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(std::isfinite(x) ? json(x) : json(nullptr));
  return a;
}

std::vector<double> from_nullable(const json& a) {
  std::vector<double> v;
  for (const auto& x : a) v.push_back(x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>());
  return v;
}

}  // namespace

std::string report_to_json(const ExperimentReport& r) {
  json rows = json::array();
  for (const auto& c : r.rows) {
    rows.push_back({{"condition", c.condition},
                    {"value", c.value},
                    {"errors", c.errors},
                    {"n_train", c.n_train},
                    {"n_test", c.n_test},
                    {"held_out_loss", nullable(c.held_out_loss)},
                    {"n_samples", c.n_samples},
                    {"mean", c.mean},
                    {"stdev", c.stdev}});
  }
  json j = {{"kind", r.kind},     {"axis", r.axis}, {"rule", r.rule},   {"mode", r.mode},
            {"seeds", r.seeds},   {"rows", rows},   {"notes", r.notes}, {"runtime_s", r.runtime_s}};
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    ExperimentReport r;
    r.kind = j.at("kind").get<std::string>();
    r.axis = j.at("axis").get<std::string>();
    r.rule = j.at("rule").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    r.notes = j.at("notes").get<std::map<std::string, double>>();
    r.runtime_s = j.at("runtime_s").get<double>();
    for (const auto& c : j.at("rows")) {
      ConditionResult x;
      x.condition = c.at("condition").get<std::string>();
      x.value = c.at("value").get<double>();
      x.errors = c.at("errors").get<std::vector<double>>();
      x.n_train = c.at("n_train").get<std::vector<std::size_t>>();
      x.n_test = c.at("n_test").get<std::vector<std::size_t>>();
      if (c.contains("held_out_loss")) x.held_out_loss = from_nullable(c.at("held_out_loss"));
      x.n_samples = c.at("n_samples").get<std::size_t>();
      x.mean = c.at("mean").get<double>();
      x.stdev = c.at("stdev").get<double>();
      r.rows.push_back(std::move(x));
    }
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("report: ") + e.what());
  }
}

std::string report_to_csv(const ExperimentReport& r) {
  std::ostringstream s;
  s.precision(17);
  s << "kind,condition,value,seed,error,n_train,n_test,mean,stdev\n";
  for (const auto& c : r.rows) {
    for (std::size_t i = 0; i < c.errors.size(); ++i) {
      s << r.kind << ",\"" << c.condition << "\"," << c.value << ',' << (i < r.seeds.size() ? r.seeds[i] : 0) << ','
        << c.errors[i] << ',' << c.n_train[i] << ',' << c.n_test[i] << ',' << c.mean << ',' << c.stdev << '\n';
    }
  }
  return s.str();
}

void write_report(const std::filesystem::path& dir, const ExperimentReport& r) {
  io::write_text_file(dir / (r.kind + ".json"), report_to_json(r));
  io::write_text_file(dir / (r.kind + ".csv"), report_to_csv(r));
}

}  // namespace gaitid::evalbench
