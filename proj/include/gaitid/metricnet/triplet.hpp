#pragma once

#include <vector>

#include "gaitid/autodiff/tape.hpp"

namespace gaitid::metricnet {

struct TripletConfig {
  double margin = 0.5;
  int classes_per_batch = 5;  // P
  int samples_per_class = 8;  // K

  void validate() const;
};

// Euclidean distances between the rows of z (n x d, row-major), n x n.
std::vector<double> pairwise_distances(const std::vector<double>& z, int n, int d);

struct BatchHard {
  double loss = 0.0;
  std::vector<double> hp;  // hardest positive distance per anchor
  std::vector<double> hn;  // hardest negative distance per anchor
  std::vector<int> hp_index;
  std::vector<int> hn_index;
};

// Throws ValidationError naming a label that occurs only once, or when fewer
// than two labels are present.
void check_batch_labels(const std::vector<int>& labels);

// mean_i max(hp(i) - hn(i) + margin, 0) on a precomputed distance matrix.
BatchHard batch_hard(const std::vector<double>& dist, const std::vector<int>& labels, double margin);

// Same loss as a differentiable tape node on embeddings z (n, d). At zero
// distance the subgradient 0 is used.
template <typename T>
autodiff::Var batch_hard_loss(autodiff::Tape<T>& tape, autodiff::Var z, const std::vector<int>& labels,
                              double margin);

}  // namespace gaitid::metricnet
