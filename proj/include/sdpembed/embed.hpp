#pragma once

#include <Eigen/Dense>

namespace sdpembed::embed {

/// Row i of coords is the embedded point of sample i.
struct Embedding {
  Eigen::MatrixXd coords;
  int k_hat = 1;
};

/// Largest relative eigengap (v_j - v_{j+1}) / (|v_j| + 1e-12) over
/// 1 <= j <= min(max_k, n - 1); ties go to the smaller j. Returns 1 when n < 2.
int estimate_k(const Eigen::VectorXd& values, int max_k);

/// Default cap on the number of clusters: ceil(n / 2).
int default_max_k(Eigen::Index n);

/// Leading k_hat eigenvectors of z_hat (descending eigenvalues, first
/// significant coordinate positive) as columns.
Embedding embed_rows(const Eigen::MatrixXd& z_hat, int k_hat);

}  // namespace sdpembed::embed
