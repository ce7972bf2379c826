#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaitid/gaitsim/radar_config.hpp"
#include "gaitid/metricnet/train.hpp"
#include "gaitid/radardsp/micro_doppler.hpp"
#include "gaitid/radardsp/micro_omega.hpp"
#include "gaitid/slicer/slicer.hpp"

namespace gaitid::cli {

struct CohortConfig {
  int n_subjects = 5;
  double minutes = 2.0;  // walking time per subject
  std::uint64_t seed = 1;

  bool operator==(const CohortConfig&) const = default;
};

struct NetConfig {
  metricnet::TrainConfig train;  // exec is not part of the file format
  std::uint64_t seed = 1;
};

struct EvalSettings {
  std::vector<std::string> experiments = {"constellation", "complexity", "size", "window"};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  double train_fraction = 0.7;
  std::vector<int> class_counts = {5, 10, 15};
  std::vector<double> minutes = {1.05, 2.10, 3.15, 4.20};
  std::vector<double> windows_s = {1.0, 1.5, 2.0};

  bool operator==(const EvalSettings&) const = default;
};

// Everything a pipeline run depends on. Missing keys keep their defaults;
// unknown keys are rejected.
struct PipelineConfig {
  gaitsim::RadarConfig radar;
  CohortConfig cohort;
  radardsp::StftParams stft;
  radardsp::OmegaParams omega;
  slicer::SlicerParams slicer;
  NetConfig net;
  EvalSettings eval;

  void validate() const;
};

bool operator==(const PipelineConfig& a, const PipelineConfig& b);

std::string config_to_json(const PipelineConfig& c);
// Throws ValidationError naming the offending key (e.g. "slicer.threshold").
PipelineConfig config_from_json(const std::string& text);

PipelineConfig load_config(const std::string& path);

}  // namespace gaitid::cli
