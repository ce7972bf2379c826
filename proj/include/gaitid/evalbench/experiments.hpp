#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gaitid/metricnet/train.hpp"
#include "gaitid/radardsp/spectrogram.hpp"
#include "gaitid/slicer/slicer.hpp"

namespace gaitid::evalbench {

using metricnet::SliceSet;

struct ConditionResult {
  std::string condition;
  double value = 0.0;  // position on the condition axis
  std::vector<double> errors;  // one per seed
  std::vector<std::size_t> n_train;
  std::vector<std::size_t> n_test;
  std::vector<double> held_out_loss;  // batch-hard loss on the held-out side
  std::size_t n_samples = 0;  // slices available to this condition
  double mean = 0.0;
  double stdev = 0.0;  // sample standard deviation over seeds

  bool operator==(const ConditionResult&) const = default;
};

struct ExperimentReport {
  std::string kind;  // constellation | complexity | size | window
  std::string axis;  // mode | n_classes | minutes | window_s
  std::string rule = "nearest-centroid";
  std::string mode;
  std::vector<std::uint64_t> seeds;
  std::vector<ConditionResult> rows;
  std::map<std::string, double> notes;
  double runtime_s = 0.0;

  bool operator==(const ExperimentReport&) const = default;
};

std::string report_to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const std::string& text);
// One row per (condition, seed) plus the condition mean/stdev.
std::string report_to_csv(const ExperimentReport& r);
// Writes <dir>/<kind>.json and <dir>/<kind>.csv.
void write_report(const std::filesystem::path& dir, const ExperimentReport& r);

struct EvalConfig {
  metricnet::TrainConfig train;
  double train_fraction = 0.7;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::function<void(const std::string&)> progress;

  void validate() const;
};

struct SeedOutcome {
  double error = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double held_out_loss = 0.0;  // NaN when the held-out side cannot form a batch
};

// Trains on split.train, classifies split.held_out by nearest centroid of the
// training embeddings.
SeedOutcome evaluate_split(const SliceSet& data, const metricnet::Split& split, const metricnet::TrainConfig& tc,
                           std::uint64_t seed);

// Modes micro-Doppler, micro-omega and concat on identical splits per seed.
ExperimentReport run_constellation(const SliceSet& data, const EvalConfig& cfg);

// Nested class subsets: per seed one class order, the first n classes form
// each condition.
ExperimentReport run_complexity(const SliceSet& data, const std::vector<int>& class_counts, const EvalConfig& cfg);

// Per seed one capture split; training captures are added per subject in a
// seeded order until the walking time reaches each condition's minutes. The
// held-out captures stay the same for every condition.
ExperimentReport run_size(const SliceSet& data, const std::vector<double>& minutes, const EvalConfig& cfg);

struct CaptureSpectra {
  radardsp::SpectrogramPair pair;
  int subject = 0;
  std::string source;
  double seconds = 0.0;
};

// `count` windows of `window_s` spread uniformly over the capture (first at
// column 0, last ending at the final column); the micro-Doppler crop is
// band-limited like an adaptive slice.
std::vector<slicer::GaitSlice> fixed_window_slices(const CaptureSpectra& capture, double window_s, std::size_t count,
                                                   const slicer::SlicerParams& p);

// Adaptive slicing against fixed windows. Each fixed condition places, per
// capture, as many windows as the adaptive slicer found there, so sample
// counts match (captures shorter than a window drop out and are reported).
ExperimentReport run_window(const std::vector<CaptureSpectra>& captures, const std::vector<double>& windows_s,
                            const slicer::SlicerParams& sp, const EvalConfig& cfg);

}  // namespace gaitid::evalbench
