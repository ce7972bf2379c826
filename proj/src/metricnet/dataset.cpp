#include "gaitid/metricnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gaitid/core/random.hpp"

namespace gaitid::metricnet {

std::string to_string(InputMode m) {
  switch (m) {
    case InputMode::ud: return "micro-doppler";
    case InputMode::uw: return "micro-omega";
    case InputMode::concat: return "concat";
  }
  return "?";
}

InputMode input_mode_from_string(const std::string& s) {
  if (s == "micro-doppler" || s == "ud") return InputMode::ud;
  if (s == "micro-omega" || s == "uw") return InputMode::uw;
  if (s == "concat") return InputMode::concat;
  throw ValidationError("mode", "unknown input mode \"" + s + "\" (micro-doppler | micro-omega | concat)");
}

int input_channels(InputMode m) { return m == InputMode::concat ? 2 : 1; }

int SliceSet::add_capture(const std::string& source, int subject, double seconds) {
  require(std::find(sources.begin(), sources.end(), source) == sources.end(), "captures",
          "duplicate capture \"" + source + "\"");
  sources.push_back(source);
  capture_subject.push_back(subject);
  capture_seconds.push_back(seconds);
  return static_cast<int>(sources.size()) - 1;
}

void SliceSet::append(const std::vector<slicer::GaitSlice>& slices) {
  for (const auto& s : slices) {
    if (labels.empty() && ud.empty()) {
      h = s.out_h;
      w = s.out_w;
    }
    require(s.out_h == h && s.out_w == w, "slices", "all slices must share one output size");
    auto it = std::find(sources.begin(), sources.end(), s.source);
    if (it == sources.end()) {
      add_capture(s.source, s.subject_id, 0.0);
      it = sources.end() - 1;
    }
    ud.insert(ud.end(), s.ud.begin(), s.ud.end());
    uw.insert(uw.end(), s.uw.begin(), s.uw.end());
    labels.push_back(s.subject_id);
    directions.push_back(s.direction);
    t_start.push_back(s.t_start);
    t_end.push_back(s.t_end);
    capture.push_back(static_cast<int>(it - sources.begin()));
  }
}

SliceSet SliceSet::subset(const std::vector<int>& indices) const {
  SliceSet out;
  out.h = h;
  out.w = w;
  out.sources = sources;
  out.capture_subject = capture_subject;
  out.capture_seconds = capture_seconds;
  const std::size_t px = pixels();
  for (int i : indices) {
    require(i >= 0 && static_cast<std::size_t>(i) < size(), "indices", "out of range");
    const auto k = static_cast<std::size_t>(i);
    out.ud.insert(out.ud.end(), ud.begin() + k * px, ud.begin() + (k + 1) * px);
    out.uw.insert(out.uw.end(), uw.begin() + k * px, uw.begin() + (k + 1) * px);
    out.labels.push_back(labels[k]);
    out.directions.push_back(directions[k]);
    out.t_start.push_back(t_start[k]);
    out.t_end.push_back(t_end[k]);
    out.capture.push_back(capture[k]);
  }
  return out;
}

std::vector<int> SliceSet::distinct_labels() const {
  std::set<int> s(labels.begin(), labels.end());
  return {s.begin(), s.end()};
}

template <typename T>
autodiff::Tensor<T> make_batch(const SliceSet& set, const std::vector<int>& indices, InputMode mode) {
  require(!indices.empty(), "batch", "no samples selected");
  const int ch = input_channels(mode);
  autodiff::Tensor<T> x({static_cast<int>(indices.size()), ch, set.h, set.w});
  const std::size_t px = set.pixels();
  for (std::size_t b = 0; b < indices.size(); ++b) {
    const auto k = static_cast<std::size_t>(indices[b]);
    T* dst = x.data.data() + b * ch * px;
    if (mode != InputMode::uw) std::copy_n(set.ud.begin() + k * px, px, dst);
    if (mode == InputMode::uw) std::copy_n(set.uw.begin() + k * px, px, dst);
    if (mode == InputMode::concat) std::copy_n(set.uw.begin() + k * px, px, dst + px);
  }
  return x;
}

template autodiff::Tensor<float> make_batch<float>(const SliceSet&, const std::vector<int>&, InputMode);
template autodiff::Tensor<double> make_batch<double>(const SliceSet&, const std::vector<int>&, InputMode);

Split split_by_capture(const SliceSet& set, double train_fraction, std::uint64_t seed) {
  require(train_fraction > 0 && train_fraction < 1, "split", "train fraction must lie in (0, 1)");
  std::map<int, std::vector<int>> captures;  // label -> capture ids
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto& v = captures[set.labels[i]];
    if (std::find(v.begin(), v.end(), set.capture[i]) == v.end()) v.push_back(set.capture[i]);
  }
  Rng rng(split_seed(seed, 0x53504C4954));
  std::set<int> train_caps;
  for (auto& [label, caps] : captures) {
    std::sort(caps.begin(), caps.end());
    rng.shuffle(caps.begin(), caps.end());
    auto n_train = static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(caps.size())));
    if (caps.size() >= 2) n_train = std::clamp<std::size_t>(n_train, 1, caps.size() - 1);
    train_caps.insert(caps.begin(), caps.begin() + static_cast<std::ptrdiff_t>(n_train));
  }
  Split s;
  for (std::size_t i = 0; i < set.size(); ++i) {
    (train_caps.count(set.capture[i]) ? s.train : s.held_out).push_back(static_cast<int>(i));
  }
  return s;
}

}  // namespace gaitid::metricnet
