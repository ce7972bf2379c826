#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "gaitid/cli/config.hpp"
#include "gaitid/evalbench/experiments.hpp"
#include "gaitid/gaitsim/capture.hpp"
#include "gaitid/gaitsim/subject.hpp"
#include "gaitid/metricnet/dataset.hpp"

namespace gaitid::cli {

namespace fs = std::filesystem;

using Progress = std::function<void(const std::string&)>;

// One walk of the synthetic cohort with everything needed to regenerate it.
struct CaptureInfo {
  std::string source;
  int subject_id = 0;
  std::size_t scenario_index = 0;
  std::uint64_t seed = 0;
  gaitsim::SubjectModel model;
  gaitsim::WalkScenario scenario;

  double seconds() const { return scenario.duration; }
};

std::vector<CaptureInfo> plan_captures(const PipelineConfig& cfg);

// Sidecar: {source, subject_id, scenario_index, seed, seconds, subject, scenario, config}.
std::string capture_to_json(const CaptureInfo& c, const gaitsim::RadarConfig& radar);
CaptureInfo capture_from_json(const std::string& text);

// (n_chirps, n_virtual, n_samples, 2) float32, last axis (re, im).
void write_raw_cube(const fs::path& path, const gaitsim::RawCube& cube);
gaitsim::RawCube read_raw_cube(const fs::path& path, const gaitsim::RadarConfig& radar);

// Synchronised micro-Doppler / micro-omega pair of one capture.
radardsp::SpectrogramPair compute_spectra(const gaitsim::ChirpSource& src, const PipelineConfig& cfg,
                                          Exec exec = Exec::parallel);

// <dir>/<stem>.rten holds (n_freq, n_time) float32; <stem>.json the axis metadata.
void write_spectrogram(const fs::path& dir, const std::string& stem, const radardsp::MicroMotionSpectrogram& s);
radardsp::MicroMotionSpectrogram read_spectrogram(const fs::path& dir, const std::string& stem);

// Slice tables: ud.rten / uw.rten (n, h, w), manifest.jsonl and captures.jsonl.
void write_slices(const fs::path& dir, const metricnet::SliceSet& set);
metricnet::SliceSet read_slices(const fs::path& dir);

// Spectrogram pairs stored under <dir>/spectrograms for the captures listed in
// <dir>/captures.jsonl.
std::vector<evalbench::CaptureSpectra> read_all_spectra(const fs::path& dir);

// Command bodies. Each reads and writes files only; summaries go to `log`.
void cmd_simulate(const PipelineConfig& cfg, const fs::path& out, const Progress& log = {});
void cmd_spectrogram(const fs::path& in, const fs::path& out, const Progress& log = {});
void cmd_slice(const fs::path& in, const fs::path& out, const Progress& log = {});
void cmd_dataset_build(const PipelineConfig& cfg, const fs::path& out, const Progress& log = {});
void cmd_train(const fs::path& dataset, const PipelineConfig& cfg, const fs::path& out, const Progress& log = {});
// Runs `experiments` (all configured ones when empty). With a checkpoint the
// training settings are taken from it.
void cmd_eval(const fs::path& dataset, const fs::path& checkpoint, const std::vector<std::string>& experiments,
              const PipelineConfig& cfg, const fs::path& out, const Progress& log = {});
void cmd_embed(const fs::path& dataset, const fs::path& checkpoint, const fs::path& out_csv,
               const Progress& log = {});

}  // namespace gaitid::cli
