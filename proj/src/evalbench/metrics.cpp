#include "gaitid/evalbench/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "gaitid/io/rten.hpp"

namespace gaitid::evalbench {

std::vector<int> centroid_classify(const std::vector<double>& train_z, const std::vector<int>& train_labels,
                                   const std::vector<double>& query_z, int dim) {
  require(!train_labels.empty(), "train", "training set is empty");
  require(dim >= 1 && train_z.size() == train_labels.size() * static_cast<std::size_t>(dim), "train",
          "embedding matrix does not match labels");
  require(query_z.size() % static_cast<std::size_t>(dim) == 0, "query", "embedding width mismatch");

  // std::map keeps classes in ascending id order, which settles ties.
  std::map<int, std::pair<std::vector<double>, int>> acc;
  for (std::size_t i = 0; i < train_labels.size(); ++i) {
    auto& [sum, count] = acc[train_labels[i]];
    sum.resize(static_cast<std::size_t>(dim), 0.0);
    for (int k = 0; k < dim; ++k) sum[k] += train_z[i * dim + k];
    ++count;
  }
  std::vector<int> ids;
  std::vector<double> centroids;
  for (auto& [label, sc] : acc) {
    ids.push_back(label);
    for (double v : sc.first) centroids.push_back(v / sc.second);
  }

  const std::size_t nq = query_z.size() / static_cast<std::size_t>(dim);
  std::vector<int> pred(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    double best = std::numeric_limits<double>::infinity();
    int best_id = ids.front();
    for (std::size_t c = 0; c < ids.size(); ++c) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) {
        const double diff = query_z[q * dim + k] - centroids[c * dim + k];
        s += diff * diff;
      }
      if (s < best) {
        best = s;
        best_id = ids[c];
      }
    }
    pred[q] = best_id;
  }
  return pred;
}

std::vector<int> centroid_classify(const autodiff::Tensor<float>& train_z, const std::vector<int>& train_labels,
                                   const autodiff::Tensor<float>& query_z) {
  require(train_z.rank() == 2 && query_z.rank() == 2 && train_z.dim(1) == query_z.dim(1), "embeddings",
          "expected (n, d) matrices of equal width");
  return centroid_classify(std::vector<double>(train_z.data.begin(), train_z.data.end()), train_labels,
                           std::vector<double>(query_z.data.begin(), query_z.data.end()), train_z.dim(1));
}

double error_rate(const std::vector<int>& pred, const std::vector<int>& truth) {
  require(pred.size() == truth.size(), "labels", "prediction and truth lengths differ");
  require(!pred.empty(), "labels", "empty label vectors");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) wrong += pred[i] != truth[i] ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(pred.size());
}

Pca2d pca2d(const std::vector<double>& z, int n, int d) {
  require(n >= 2 && d >= 2 && z.size() == static_cast<std::size_t>(n) * d, "pca", "need an n x d matrix, n, d >= 2");
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Mat x = Eigen::Map<const Mat>(z.data(), n, d);
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  require(es.info() == Eigen::Success, "pca", "eigendecomposition failed");

  Pca2d r;
  r.components.resize(static_cast<std::size_t>(2) * d);
  for (int k = 0; k < 2; ++k) {
    // Eigenvalues come out ascending.
    Eigen::VectorXd v = es.eigenvectors().col(d - 1 - k);
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    if (v(at) < 0) v = -v;  // deterministic sign
    r.variance[k] = std::max(0.0, es.eigenvalues()(d - 1 - k));
    for (int j = 0; j < d; ++j) r.components[static_cast<std::size_t>(k) * d + j] = v(j);
  }
  r.projection.resize(static_cast<std::size_t>(n) * 2);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 2; ++k) {
      double s = 0.0;
      for (int j = 0; j < d; ++j) s += x(i, j) * r.components[static_cast<std::size_t>(k) * d + j];
      r.projection[static_cast<std::size_t>(i) * 2 + k] = s;
    }
  }
  return r;
}

void export_embeddings(const std::filesystem::path& path, const autodiff::Tensor<float>& z,
                       const std::vector<int>& labels, const std::vector<gaitsim::Direction>& directions) {
  require(z.rank() == 2 && static_cast<std::size_t>(z.dim(0)) == labels.size() && labels.size() == directions.size(),
          "embeddings", "rows, labels and directions must agree");
  const int d = z.dim(1);
  std::ostringstream out;
  out.precision(9);
  out << "subject,direction";
  for (int k = 1; k <= d; ++k) out << ",z_" << k;
  out << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << labels[i] << ',' << gaitsim::to_string(directions[i]);
    for (int k = 0; k < d; ++k) out << ',' << z.data[i * d + k];
    out << '\n';
  }
  io::write_text_file(path, out.str());
}

}  // namespace gaitid::evalbench
