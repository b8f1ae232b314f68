#pragma once

#include "sdpembed/gmm_model.hpp"

#include <Eigen/Dense>

#include <vector>

namespace sdpembed::cluster {

/// Labels 1..K, every label used at least once.
struct Labeling {
  std::vector<int> labels;

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(labels.size()); }
  int num_clusters() const;
  /// Throws ValidationError unless labels cover exactly 1..K.
  void validate() const;
};

/// Binary same-cluster indicator (symmetric, unit diagonal, transitive).
struct ClusterMatrix {
  Eigen::MatrixXd entries;

  Eigen::Index size() const noexcept { return entries.rows(); }
};

ClusterMatrix cluster_matrix(const Labeling& labels);

/// <Zbar, 1 1^t> = sum_k n_k^2.
double lambda0(const Labeling& labels);

/// Connected components of the graph with an edge wherever z_hat_ij > 1/2,
/// numbered in order of their smallest member.
Labeling threshold_graph_clusters(const Eigen::MatrixXd& z_hat);

/// Euclidean minimum spanning tree (Prim) with the k - 1 heaviest edges
/// removed; ties broken by lexicographic endpoint order. Components numbered
/// in order of their smallest member.
Labeling mst_clusters(const Eigen::MatrixXd& points, int k);

/// Fraction of the n(n-1)/2 pairs whose predicted edge 1{z_hat_ij > 1/2}
/// disagrees with zbar.
double edge_error_rate(const Eigen::MatrixXd& z_hat, const ClusterMatrix& zbar);

/// n^-2 ||z_hat - zbar||_1.
double l1_error_normalized(const Eigen::MatrixXd& z_hat, const ClusterMatrix& zbar);

/// min(1, 2 exp(-((t - t0)/c)^2 n)); requires a separated report and t > t0.
double recovery_tail_bound(const gmm::SeparationReport& report, double t, int n);

/// 2 exp(-(t - 2 sqrt(2 ln 2) ell sigma)^2 / (32 ell^2 sigma^2) n), the tail
/// bound on ||A - E A||_{inf->1} / n^2 exceeding t.
double concentration_bound(double t, double ell, double sigma, int n);

/// Number of predicted edges (i < j with z_hat_ij > 1/2).
long long predicted_edges(const Eigen::MatrixXd& z_hat);

}  // namespace sdpembed::cluster
