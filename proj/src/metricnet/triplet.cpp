#include "gaitid/metricnet/triplet.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace gaitid::metricnet {

void TripletConfig::validate() const {
  require(margin > 0, "net.triplet.margin", "must be positive");
  require(classes_per_batch >= 2, "net.triplet.P", "must be at least 2");
  require(samples_per_class >= 2, "net.triplet.K", "must be at least 2");
}

std::vector<double> pairwise_distances(const std::vector<double>& z, int n, int d) {
  require(n >= 1 && d >= 1 && z.size() == static_cast<std::size_t>(n) * d, "embeddings", "size mismatch");
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = z[static_cast<std::size_t>(i) * d + k] - z[static_cast<std::size_t>(j) * d + k];
        s += diff * diff;
      }
      out[static_cast<std::size_t>(i) * n + j] = out[static_cast<std::size_t>(j) * n + i] = std::sqrt(s);
    }
  }
  return out;
}

void check_batch_labels(const std::vector<int>& labels) {
  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  for (const auto& [label, count] : counts) {
    require(count >= 2, "labels", "label " + std::to_string(label) + " appears only once in the batch");
  }
  require(counts.size() >= 2, "labels", "a batch needs at least two distinct labels");
}

BatchHard batch_hard(const std::vector<double>& dist, const std::vector<int>& labels, double margin) {
  check_batch_labels(labels);
  const int n = static_cast<int>(labels.size());
  require(dist.size() == static_cast<std::size_t>(n) * n, "distances", "matrix does not match the labels");
  BatchHard r;
  r.hp.assign(n, -std::numeric_limits<double>::infinity());
  r.hn.assign(n, std::numeric_limits<double>::infinity());
  r.hp_index.assign(n, -1);
  r.hn_index.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double v = dist[static_cast<std::size_t>(i) * n + j];
      if (labels[j] == labels[i]) {
        if (v > r.hp[i]) {
          r.hp[i] = v;
          r.hp_index[i] = j;
        }
      } else if (v < r.hn[i]) {
        r.hn[i] = v;
        r.hn_index[i] = j;
      }
    }
    r.loss += std::max(r.hp[i] - r.hn[i] + margin, 0.0);
  }
  r.loss /= n;
  return r;
}

template <typename T>
autodiff::Var batch_hard_loss(autodiff::Tape<T>& tape, autodiff::Var z, const std::vector<int>& labels,
                              double margin) {
  const auto& zv = tape.value(z);
  require(zv.rank() == 2 && zv.dim(0) == static_cast<int>(labels.size()), "embeddings",
          "expected (n, d) with one label per row, got " + autodiff::shape_string(zv.dims));
  const int n = zv.dim(0);
  const int d = zv.dim(1);
  const std::vector<double> zd(zv.data.begin(), zv.data.end());
  const std::vector<double> dist = pairwise_distances(zd, n, d);
  BatchHard bh = batch_hard(dist, labels, margin);

  autodiff::Tensor<T> out({1});
  out[0] = static_cast<T>(bh.loss);
  return tape.push(std::move(out), {z},
                   [z, n, d, margin, bh = std::move(bh), dist](autodiff::Tape<T>& t, autodiff::Var self) {
                     const double g0 = t.grad(self)[0] / n;
                     const auto& zv = t.value(z);
                     auto& gz = t.grad(z);
                     // d||a - b|| / da = (a - b) / ||a - b||, and the opposite for b.
                     const auto pull = [&](int a, int b, double scale) {
                       const double dab = dist[static_cast<std::size_t>(a) * n + b];
                       if (dab <= 0.0) return;
                       for (int k = 0; k < d; ++k) {
                         const std::size_t ia = static_cast<std::size_t>(a) * d + k;
                         const std::size_t ib = static_cast<std::size_t>(b) * d + k;
                         const double u = (static_cast<double>(zv[ia]) - zv[ib]) / dab * scale;
                         gz[ia] += static_cast<T>(u);
                         gz[ib] -= static_cast<T>(u);
                       }
                     };
                     for (int i = 0; i < n; ++i) {
                       if (!(bh.hp[i] - bh.hn[i] + margin > 0.0)) continue;
                       pull(i, bh.hp_index[i], g0);
                       pull(i, bh.hn_index[i], -g0);
                     }
                   });
}

template autodiff::Var batch_hard_loss<float>(autodiff::Tape<float>&, autodiff::Var, const std::vector<int>&, double);
template autodiff::Var batch_hard_loss<double>(autodiff::Tape<double>&, autodiff::Var, const std::vector<int>&, double);

}  // namespace gaitid::metricnet
