#pragma once

#include <filesystem>
#include <vector>

#include "gaitid/autodiff/tensor.hpp"
#include "gaitid/gaitsim/scenario.hpp"

namespace gaitid::evalbench {

// Nearest class centroid (Euclidean) of each query row; ties go to the
// smaller class id. Embeddings are row-major with `dim` columns.
std::vector<int> centroid_classify(const std::vector<double>& train_z, const std::vector<int>& train_labels,
                                   const std::vector<double>& query_z, int dim);
std::vector<int> centroid_classify(const autodiff::Tensor<float>& train_z, const std::vector<int>& train_labels,
                                   const autodiff::Tensor<float>& query_z);

double error_rate(const std::vector<int>& pred, const std::vector<int>& truth);

struct Pca2d {
  std::vector<double> projection;  // (n, 2), mean-centred scores
  std::vector<double> components;  // (2, d), unit rows
  double variance[2] = {0.0, 0.0};
};

// Top two principal components of the rows of z (n x d).
Pca2d pca2d(const std::vector<double>& z, int n, int d);

// CSV with header subject,direction,z_1..z_d.
void export_embeddings(const std::filesystem::path& path, const autodiff::Tensor<float>& z,
                       const std::vector<int>& labels, const std::vector<gaitsim::Direction>& directions);

}  // namespace gaitid::evalbench
