#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gaitid/gaitsim/scenario.hpp"
#include "gaitid/radardsp/spectrogram.hpp"

namespace gaitid::slicer {

using gaitsim::Direction;
using radardsp::MicroMotionSpectrogram;
using radardsp::SpectrogramPair;

struct SlicerParams {
  double threshold = 0.15;
  int kernel_h = 3;  // odd
  int kernel_w = 3;  // odd
  int smooth_columns = 5;
  double min_sep_s = 0.3;
  double prominence = 0.1;  // fraction of the boundary signal's range
  int out_h = 64;
  int out_w = 64;
  double min_duration_s = 0.25;
  double max_duration_s = 0.9;

  void validate() const;
};

// Row-major binary image.
struct BinaryImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;

  BinaryImage() = default;
  BinaryImage(std::size_t r, std::size_t c) : rows(r), cols(c), pixels(r * c, 0) {}
  bool at(std::size_t r, std::size_t c) const { return pixels[r * cols + c] != 0; }
  void set(std::size_t r, std::size_t c, bool v) { pixels[r * cols + c] = v ? 1 : 0; }
  bool operator==(const BinaryImage&) const = default;
};

BinaryImage threshold_image(std::span<const float> gray, std::size_t rows, std::size_t cols, double threshold);

// Closing with a kh x kw rectangle. Pixels outside the image count as
// background for the dilation and the erosion reads the dilated image on the
// padded domain, so the border is not eroded away and closing stays
// extensive (closed >= input).
BinaryImage close(const BinaryImage& mask, int kh, int kw);

BinaryImage binarize_and_close(const MicroMotionSpectrogram& gray, double threshold = 0.15, int kh = 3, int kw = 3);

// Per-column envelopes of the masked signature. Sides follow the sign of the
// column CoG: when cog >= 0 primary is the top extent, otherwise the bottom.
struct EnvelopeSet {
  std::vector<double> primary;
  std::vector<double> secondary;
  std::vector<double> cog;  // intensity-weighted mean velocity of masked pixels
  std::vector<std::uint8_t> valid;
  double t0 = 0.0;
  double hop_s = 0.0;

  std::size_t size() const { return cog.size(); }
  double time(std::size_t c) const { return t0 + static_cast<double>(c) * hop_s; }
};

EnvelopeSet envelopes_and_cog(const MicroMotionSpectrogram& gray, const BinaryImage& mask);

// Smoothed |primary - cog| over the valid span; invalid interior columns are
// filled linearly. Columns outside the valid span hold NaN.
std::vector<double> boundary_signal(const EnvelopeSet& env, int smooth_columns = 5);

// Column indices of half-gait boundaries: prominent local minima of the
// boundary signal, greedily kept by prominence with a minimum separation.
// Returns an empty list when fewer than two survive.
std::vector<std::size_t> detect_boundary_columns(const EnvelopeSet& env, const SlicerParams& p = {});
std::vector<double> detect_boundaries(const EnvelopeSet& env, const SlicerParams& p = {});

struct GaitSlice {
  int out_h = 64;
  int out_w = 64;
  std::vector<float> ud;  // (out_h, out_w), velocity rows ascending
  std::vector<float> uw;  // (out_h, out_w), rate rows ascending
  int subject_id = -1;
  Direction direction = Direction::toward;
  double t_start = 0.0;
  double t_end = 0.0;
  std::string source;

  double duration() const { return t_end - t_start; }
};

struct SliceStats {
  std::size_t emitted = 0;
  std::size_t skipped_duration = 0;
  std::size_t skipped_degenerate = 0;
};

// Bilinear resize with pixel-centre alignment.
std::vector<float> resize_bilinear(std::span<const float> src, std::size_t rows, std::size_t cols, int out_h,
                                   int out_w);

// One slice per adjacent boundary pair over columns [c_i, c_{i+1}]. Rows of
// the micro-Doppler crop outside [min envelope, max envelope] are zeroed
// before resizing; the micro-omega crop keeps its full extent.
std::vector<GaitSlice> extract_slices(const SpectrogramPair& pair, const EnvelopeSet& env,
                                      std::span<const std::size_t> boundaries, const SlicerParams& p,
                                      SliceStats* stats = nullptr);

struct SliceResult {
  EnvelopeSet envelopes;
  std::vector<std::size_t> boundaries;
  std::vector<GaitSlice> slices;
  SliceStats stats;
};

// Full pipeline on a synchronised pair; slices carry subject_id and source.
SliceResult slice_capture(const SpectrogramPair& pair, int subject_id, const std::string& source,
                          const SlicerParams& p = {});

}  // namespace gaitid::slicer
