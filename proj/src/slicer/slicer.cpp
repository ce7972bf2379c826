#include "gaitid/slicer/slicer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gaitid/core/error.hpp"

namespace gaitid::slicer {

void SlicerParams::validate() const {
  require(threshold > 0 && threshold < 1, "slicer.threshold", "must lie in (0, 1)");
  require(kernel_h >= 1 && kernel_h % 2 == 1, "slicer.kernel", "height must be odd and positive");
  require(kernel_w >= 1 && kernel_w % 2 == 1, "slicer.kernel", "width must be odd and positive");
  require(smooth_columns >= 1 && smooth_columns % 2 == 1, "slicer.smooth_columns", "must be odd and positive");
  require(min_sep_s >= 0, "slicer.min_sep_s", "must be non-negative");
  require(prominence >= 0 && prominence <= 1, "slicer.prominence", "must lie in [0, 1]");
  require(out_h >= 2 && out_w >= 2, "slicer.out_size", "must be at least 2x2");
  require(min_duration_s > 0 && max_duration_s > min_duration_s, "slicer.max_duration_s",
          "need 0 < min_duration_s < max_duration_s");
}

BinaryImage threshold_image(std::span<const float> gray, std::size_t rows, std::size_t cols, double threshold) {
  require(gray.size() == rows * cols, "gray", "size does not match dimensions");
  BinaryImage m(rows, cols);
  for (std::size_t i = 0; i < gray.size(); ++i) m.pixels[i] = gray[i] >= threshold ? 1 : 0;
  return m;
}

BinaryImage close(const BinaryImage& mask, int kh, int kw) {
  require(kh >= 1 && kh % 2 == 1 && kw >= 1 && kw % 2 == 1, "slicer.kernel", "must be odd and positive");
  const auto ph = static_cast<std::ptrdiff_t>(kh / 2);
  const auto pw = static_cast<std::ptrdiff_t>(kw / 2);
  const auto rows = static_cast<std::ptrdiff_t>(mask.rows);
  const auto cols = static_cast<std::ptrdiff_t>(mask.cols);
  const std::ptrdiff_t prow = rows + 2 * ph;
  const std::ptrdiff_t pcol = cols + 2 * pw;

  // Separable dilation on the padded domain (padded coordinate = image + pad).
  std::vector<std::uint8_t> horiz(static_cast<std::size_t>(prow * pcol), 0);
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      if (!mask.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c))) continue;
      for (std::ptrdiff_t d = 0; d <= 2 * pw; ++d) horiz[(r + ph) * pcol + c + d] = 1;
    }
  }
  std::vector<std::uint8_t> dilated(horiz.size(), 0);
  for (std::ptrdiff_t r = ph; r < rows + ph; ++r) {
    for (std::ptrdiff_t c = 0; c < pcol; ++c) {
      if (!horiz[r * pcol + c]) continue;
      for (std::ptrdiff_t d = -ph; d <= ph; ++d) dilated[(r + d) * pcol + c] = 1;
    }
  }

  BinaryImage out(mask.rows, mask.cols);
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      bool all = true;
      for (std::ptrdiff_t dr = 0; dr <= 2 * ph && all; ++dr) {
        for (std::ptrdiff_t dc = 0; dc <= 2 * pw; ++dc) {
          if (!dilated[(r + dr) * pcol + c + dc]) {
            all = false;
            break;
          }
        }
      }
      out.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), all);
    }
  }
  return out;
}

BinaryImage binarize_and_close(const MicroMotionSpectrogram& gray, double threshold, int kh, int kw) {
  return close(threshold_image(gray.values, gray.n_freq, gray.n_time, threshold), kh, kw);
}

EnvelopeSet envelopes_and_cog(const MicroMotionSpectrogram& gray, const BinaryImage& mask) {
  require(mask.rows == gray.n_freq && mask.cols == gray.n_time, "mask", "dimensions differ from the spectrogram");
  EnvelopeSet env;
  const std::size_t n = gray.n_time;
  env.primary.assign(n, 0.0);
  env.secondary.assign(n, 0.0);
  env.cog.assign(n, 0.0);
  env.valid.assign(n, 0);
  env.t0 = gray.t0;
  env.hop_s = gray.hop_s;
  for (std::size_t c = 0; c < n; ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t f = 0; f < gray.n_freq; ++f) {
      if (!mask.at(f, c)) continue;
      const double v = gray.freq_axis[f];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      num += v * gray.at(f, c);
      den += gray.at(f, c);
    }
    if (!(hi >= lo)) continue;
    // Closing can set pixels whose intensity is zero; fall back to the centre
    // of the extent when no masked pixel carries weight.
    const double cog = den > 0.0 ? num / den : 0.5 * (lo + hi);
    env.valid[c] = 1;
    env.cog[c] = cog;
    env.primary[c] = cog >= 0.0 ? hi : lo;
    env.secondary[c] = cog >= 0.0 ? lo : hi;
  }
  return env;
}

std::vector<double> boundary_signal(const EnvelopeSet& env, int smooth_columns) {
  const std::size_t n = env.size();
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  std::size_t first = n;
  std::size_t last = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (!env.valid[c]) continue;
    first = std::min(first, c);
    last = c;
  }
  if (first == n) return out;

  std::vector<double> raw(last - first + 1);
  std::size_t prev = first;
  for (std::size_t c = first; c <= last; ++c) {
    if (!env.valid[c]) continue;
    const double v = std::abs(env.primary[c] - env.cog[c]);
    raw[c - first] = v;
    if (c > prev + 1) {
      const double a = raw[prev - first];
      for (std::size_t k = prev + 1; k < c; ++k) {
        const double t = static_cast<double>(k - prev) / static_cast<double>(c - prev);
        raw[k - first] = a + t * (v - a);
      }
    }
    prev = c;
  }

  const auto len = static_cast<std::ptrdiff_t>(raw.size());
  const int half = smooth_columns / 2;
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    double sum = 0.0;
    for (int d = -half; d <= half; ++d) sum += raw[std::clamp<std::ptrdiff_t>(i + d, 0, len - 1)];
    out[first + static_cast<std::size_t>(i)] = sum / smooth_columns;
  }
  return out;
}

std::vector<std::size_t> detect_boundary_columns(const EnvelopeSet& env, const SlicerParams& p) {
  p.validate();
  const std::vector<double> s = boundary_signal(env, p.smooth_columns);
  std::size_t a = 0;
  while (a < s.size() && std::isnan(s[a])) ++a;
  if (a == s.size()) return {};
  std::size_t b = s.size() - 1;
  while (std::isnan(s[b])) --b;
  if (b < a + 4) return {};

  const auto [mn, mx] = std::minmax_element(s.begin() + static_cast<std::ptrdiff_t>(a),
                                            s.begin() + static_cast<std::ptrdiff_t>(b) + 1);
  const double range = *mx - *mn;
  if (!(range > 0.0)) return {};

  struct Candidate {
    std::size_t column;
    double prominence;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = a + 2; i + 2 <= b; ++i) {
    if (!(s[i] < s[i - 1])) continue;
    // First column of a plateau counts when the plateau rises on the right.
    std::size_t j = i + 1;
    while (j <= b && s[j] == s[i]) ++j;
    if (j > b || !(s[j] > s[i])) continue;

    double left = s[i];
    for (std::size_t k = i; k-- > a;) {
      if (s[k] < s[i]) break;
      left = std::max(left, s[k]);
    }
    double right = s[i];
    for (std::size_t k = i + 1; k <= b; ++k) {
      if (s[k] < s[i]) break;
      right = std::max(right, s[k]);
    }
    const double prom = std::min(left, right) - s[i];
    if (prom >= p.prominence * range) cands.push_back({i, prom});
  }

  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& x, const Candidate& y) { return x.prominence > y.prominence; });
  const double min_sep = p.min_sep_s / env.hop_s - 1e-9;
  std::vector<std::size_t> kept;
  for (const auto& c : cands) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return std::abs(static_cast<double>(k) - static_cast<double>(c.column)) >= min_sep;
    });
    if (clear) kept.push_back(c.column);
  }
  if (kept.size() < 2) return {};
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<double> detect_boundaries(const EnvelopeSet& env, const SlicerParams& p) {
  std::vector<double> t;
  for (auto c : detect_boundary_columns(env, p)) t.push_back(env.time(c));
  return t;
}

std::vector<float> resize_bilinear(std::span<const float> src, std::size_t rows, std::size_t cols, int out_h,
                                   int out_w) {
  require(src.size() == rows * cols && rows > 0 && cols > 0, "resize", "bad source dimensions");
  std::vector<float> out(static_cast<std::size_t>(out_h) * out_w);
  const double sy = static_cast<double>(rows) / out_h;
  const double sx = static_cast<double>(cols) / out_w;
  for (int y = 0; y < out_h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(rows - 1));
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, rows - 1);
    const double wy = fy - static_cast<double>(y0);
    for (int x = 0; x < out_w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(cols - 1));
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, cols - 1);
      const double wx = fx - static_cast<double>(x0);
      const double top = (1 - wx) * src[y0 * cols + x0] + wx * src[y0 * cols + x1];
      const double bot = (1 - wx) * src[y1 * cols + x0] + wx * src[y1 * cols + x1];
      out[static_cast<std::size_t>(y) * out_w + x] = static_cast<float>((1 - wy) * top + wy * bot);
    }
  }
  return out;
}

std::vector<GaitSlice> extract_slices(const SpectrogramPair& pair, const EnvelopeSet& env,
                                      std::span<const std::size_t> boundaries, const SlicerParams& p,
                                      SliceStats* stats) {
  p.validate();
  const auto& ud = pair.ud;
  const auto& uw = pair.uw;
  require(ud.n_time == uw.n_time && ud.n_time == env.size(), "slices", "spectrograms are not synchronised");
  require(std::is_sorted(boundaries.begin(), boundaries.end()), "boundaries", "must be sorted");
  SliceStats local;
  SliceStats& st = stats ? *stats : local;
  std::vector<GaitSlice> out;

  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    const std::size_t c0 = boundaries[i];
    const std::size_t c1 = boundaries[i + 1];
    require(c1 < ud.n_time, "boundaries", "column beyond the spectrogram");
    const double dur = static_cast<double>(c1 - c0) * ud.hop_s;
    if (dur < p.min_duration_s - 1e-9 || dur > p.max_duration_s + 1e-9) {
      ++st.skipped_duration;
      continue;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double cog_sum = 0.0;
    for (std::size_t c = c0; c <= c1; ++c) {
      if (!env.valid[c]) continue;
      lo = std::min({lo, env.primary[c], env.secondary[c]});
      hi = std::max({hi, env.primary[c], env.secondary[c]});
      cog_sum += env.cog[c];
    }
    if (!(hi > lo)) {
      ++st.skipped_degenerate;
      continue;
    }

    const std::size_t w = c1 - c0 + 1;
    std::vector<float> crop(ud.n_freq * w, 0.0f);
    for (std::size_t f = 0; f < ud.n_freq; ++f) {
      const double v = ud.freq_axis[f];
      if (v < lo || v > hi) continue;
      for (std::size_t c = 0; c < w; ++c) crop[f * w + c] = ud.at(f, c0 + c);
    }
    std::vector<float> wcrop(uw.n_freq * w);
    for (std::size_t f = 0; f < uw.n_freq; ++f) {
      for (std::size_t c = 0; c < w; ++c) wcrop[f * w + c] = uw.at(f, c0 + c);
    }

    GaitSlice s;
    s.out_h = p.out_h;
    s.out_w = p.out_w;
    s.ud = resize_bilinear(crop, ud.n_freq, w, p.out_h, p.out_w);
    s.uw = resize_bilinear(wcrop, uw.n_freq, w, p.out_h, p.out_w);
    s.direction = cog_sum >= 0.0 ? Direction::toward : Direction::away;
    s.t_start = ud.time(c0);
    s.t_end = ud.time(c1);
    out.push_back(std::move(s));
    ++st.emitted;
  }
  return out;
}

SliceResult slice_capture(const SpectrogramPair& pair, int subject_id, const std::string& source,
                          const SlicerParams& p) {
  p.validate();
  SliceResult r;
  const BinaryImage mask = binarize_and_close(pair.ud, p.threshold, p.kernel_h, p.kernel_w);
  r.envelopes = envelopes_and_cog(pair.ud, mask);
  r.boundaries = detect_boundary_columns(r.envelopes, p);
  r.slices = extract_slices(pair, r.envelopes, r.boundaries, p, &r.stats);
  for (auto& s : r.slices) {
    s.subject_id = subject_id;
    s.source = source;
  }
  return r;
}

}  // namespace gaitid::slicer
