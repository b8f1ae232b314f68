#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace sdpembed::gmm {

/// One Gaussian component: mean, covariance and the number of samples drawn from it.
struct ClusterSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  int size = 0;
};

/// Ground-truth Gaussian cluster model. Immutable once constructed.
///
/// Covariances must be symmetric to 1e-12 and have eigenvalues >= -1e-10;
/// slightly negative eigenvalues are clamped to zero and the clamped
/// eigendecomposition is kept for sampling and the closed-form expectations.
/// Cluster indices are 0-based in this API (1-based only in files and labels).
class GaussianMixtureSpec {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;
  static constexpr double kEigenvalueFloor = -1e-10;

  GaussianMixtureSpec(int dim, std::vector<ClusterSpec> clusters);

  int dim() const noexcept { return dim_; }
  int num_clusters() const noexcept { return static_cast<int>(clusters_.size()); }
  int total_size() const noexcept { return total_size_; }
  const std::vector<ClusterSpec>& clusters() const noexcept { return clusters_; }
  const ClusterSpec& cluster(int k) const;

  /// Clamped eigenvalues (ascending) and eigenvectors of the k-th covariance.
  const Eigen::VectorXd& cov_eigenvalues(int k) const;
  const Eigen::MatrixXd& cov_eigenvectors(int k) const;

  /// Largest covariance eigenvalue rho(Sigma_k).
  double cov_spectral_radius(int k) const;

  /// 1-based labels in cluster order: n_1 ones, then n_2 twos, ...
  std::vector<int> labels() const;

  /// sum_k n_k^2
  double lambda0() const;

 private:
  int dim_;
  int total_size_ = 0;
  std::vector<ClusterSpec> clusters_;
  std::vector<Eigen::VectorXd> eigvals_;
  std::vector<Eigen::MatrixXd> eigvecs_;
};

struct LabeledDataSet {
  Eigen::MatrixXd points;   // n x d, row i = x_i
  std::vector<int> labels;  // 1..K
};

/// Grothendieck constant upper bound used in every bound.
inline constexpr double kGrothendieck = 1.8;

struct SeparationReport {
  double p = 0.0;
  double q = 0.0;
  double sigma = 0.0;
  double ell = 0.0;
  double kg = kGrothendieck;
  double t0 = 0.0;
  double c = 0.0;
  bool separated = false;
};

/// Draws n_k rows from N(mu_k, Sigma_k) per cluster, in cluster order.
LabeledDataSet sample(const GaussianMixtureSpec& spec, std::uint64_t seed);

/// E[exp(t ||X||^2)] for X ~ N(mu, sigma), t <= 0.
double gaussian_quadratic_laplace(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma, double t);

/// E f(||x_i - x_j||) for the Gaussian affinity with i in cluster k, j in cluster k2, i != j.
double expected_affinity(const GaussianMixtureSpec& spec, int k, int k2, double h0);

/// sigma^2 = (1/n) sum_k n_k rho(Sigma_k)
double sigma_squared(const GaussianMixtureSpec& spec);

/// p, q, sigma and the recovery-bound constants t0, c for a Gaussian affinity
/// with bandwidth h0 and Lipschitz constant ell. K = 1 gives q = 0, separated.
SeparationReport separation_report(const GaussianMixtureSpec& spec, double h0, double ell);

/// Closed-form p > q test for two one-dimensional clusters.
bool check_separation_1d(double mu1, double mu2, double s1sq, double s2sq, double h0);

}  // namespace sdpembed::gmm
