#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaitid/autodiff/tensor.hpp"
#include "gaitid/slicer/slicer.hpp"

namespace gaitid::metricnet {

enum class InputMode { ud, uw, concat };

std::string to_string(InputMode m);
InputMode input_mode_from_string(const std::string& s);
int input_channels(InputMode m);

// Flat storage of gait slices. `capture` indexes `sources`.
struct SliceSet {
  int h = 64;
  int w = 64;
  std::vector<float> ud;
  std::vector<float> uw;
  std::vector<int> labels;
  std::vector<gaitsim::Direction> directions;
  std::vector<double> t_start;
  std::vector<double> t_end;
  std::vector<int> capture;
  // Per capture: name, subject and walking time in seconds.
  std::vector<std::string> sources;
  std::vector<int> capture_subject;
  std::vector<double> capture_seconds;

  std::size_t size() const { return labels.size(); }
  std::size_t pixels() const { return static_cast<std::size_t>(h) * w; }

  // Registers a capture (also one that yields no slices); returns its index.
  int add_capture(const std::string& source, int subject, double seconds);
  // Appends slices; a `source` not registered yet is added with unknown
  // (zero) duration.
  void append(const std::vector<slicer::GaitSlice>& slices);
  SliceSet subset(const std::vector<int>& indices) const;
  std::vector<int> distinct_labels() const;
};

// (n, channels, h, w) input batch; concat stacks ud then uw.
template <typename T>
autodiff::Tensor<T> make_batch(const SliceSet& set, const std::vector<int>& indices, InputMode mode);

struct Split {
  std::vector<int> train;
  std::vector<int> held_out;
};

// Splits per subject by whole captures so that no capture contributes to both
// sides; roughly `train_fraction` of each subject's captures go to training
// (at least one on each side when the subject has two or more).
Split split_by_capture(const SliceSet& set, double train_fraction, std::uint64_t seed);

}  // namespace gaitid::metricnet
