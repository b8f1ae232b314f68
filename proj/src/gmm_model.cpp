#include "sdpembed/gmm_model.hpp"

#include "sdpembed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace sdpembed::gmm {

GaussianMixtureSpec::GaussianMixtureSpec(int dim, std::vector<ClusterSpec> clusters)
    : dim_(dim), clusters_(std::move(clusters)) {
  if (dim_ < 1) throw ValidationError("mixture dimension must be positive");
  if (clusters_.empty()) throw ValidationError("mixture needs at least one cluster");

  for (std::size_t k = 0; k < clusters_.size(); ++k) {
    auto& c = clusters_[k];
    const std::string where = "cluster " + std::to_string(k + 1) + ": ";
    if (c.size < 1) throw ValidationError(where + "size must be positive");
    if (c.mean.size() != dim_) throw ValidationError(where + "mean has wrong length");
    if (c.cov.rows() != dim_ || c.cov.cols() != dim_) {
      throw ValidationError(where + "covariance has wrong shape");
    }
    if (!c.mean.allFinite() || !c.cov.allFinite()) {
      throw ValidationError(where + "non-finite parameter");
    }
    const double asym = (c.cov - c.cov.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance) {
      throw ValidationError(where + "covariance is not symmetric");
    }
    c.cov = 0.5 * (c.cov + c.cov.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.cov);
    if (es.info() != Eigen::Success) {
      throw NumericalError(where + "covariance eigendecomposition failed");
    }
    Eigen::VectorXd values = es.eigenvalues();
    if (values.minCoeff() < kEigenvalueFloor) {
      throw ValidationError(where + "covariance is not positive semidefinite (eigenvalue " +
                            std::to_string(values.minCoeff()) + ")");
    }
    values = values.cwiseMax(0.0);
    eigvals_.push_back(std::move(values));
    eigvecs_.push_back(es.eigenvectors());
    total_size_ += c.size;
  }
  if (total_size_ < 2) throw ValidationError("mixture needs at least two samples in total");
}

const ClusterSpec& GaussianMixtureSpec::cluster(int k) const {
  if (k < 0 || k >= num_clusters()) throw RangeError("cluster index out of range");
  return clusters_[static_cast<std::size_t>(k)];
}

const Eigen::VectorXd& GaussianMixtureSpec::cov_eigenvalues(int k) const {
  if (k < 0 || k >= num_clusters()) throw RangeError("cluster index out of range");
  return eigvals_[static_cast<std::size_t>(k)];
}

const Eigen::MatrixXd& GaussianMixtureSpec::cov_eigenvectors(int k) const {
  if (k < 0 || k >= num_clusters()) throw RangeError("cluster index out of range");
  return eigvecs_[static_cast<std::size_t>(k)];
}

double GaussianMixtureSpec::cov_spectral_radius(int k) const {
  return cov_eigenvalues(k).maxCoeff();
}

std::vector<int> GaussianMixtureSpec::labels() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(total_size_));
  for (int k = 0; k < num_clusters(); ++k) {
    out.insert(out.end(), static_cast<std::size_t>(clusters_[static_cast<std::size_t>(k)].size),
               k + 1);
  }
  return out;
}

double GaussianMixtureSpec::lambda0() const {
  double s = 0.0;
  for (const auto& c : clusters_) s += static_cast<double>(c.size) * c.size;
  return s;
}

LabeledDataSet sample(const GaussianMixtureSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const int d = spec.dim();
  LabeledDataSet out;
  out.points.resize(spec.total_size(), d);
  out.labels = spec.labels();

  Eigen::VectorXd xi(d);
  Eigen::Index row = 0;
  for (int k = 0; k < spec.num_clusters(); ++k) {
    const auto& c = spec.cluster(k);
    // x = mu + V diag(sqrt(lambda)) xi
    const Eigen::MatrixXd root =
        spec.cov_eigenvectors(k) * spec.cov_eigenvalues(k).cwiseSqrt().asDiagonal();
    for (int i = 0; i < c.size; ++i) {
      for (int l = 0; l < d; ++l) xi(l) = normal(rng);
      out.points.row(row++) = (c.mean + root * xi).transpose();
    }
  }
  return out;
}

double gaussian_quadratic_laplace(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                                  double t) {
  if (t > 0.0) throw DomainError("quadratic Laplace transform requires t <= 0");
  if (sigma.rows() != mu.size() || sigma.cols() != mu.size()) {
    throw ValidationError("mean and covariance dimensions differ");
  }
  if (t == 0.0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sigma + sigma.transpose()));
  const Eigen::VectorXd proj = es.eigenvectors().transpose() * mu;
  double log_value = 0.0;
  for (Eigen::Index l = 0; l < mu.size(); ++l) {
    const double s2 = std::max(es.eigenvalues()(l), 0.0);
    const double denom = 1.0 - 2.0 * t * s2;
    log_value += proj(l) * proj(l) * t / denom - 0.5 * std::log(denom);
  }
  return std::exp(log_value);
}

double expected_affinity(const GaussianMixtureSpec& spec, int k, int k2, double h0) {
  if (!(h0 > 0.0)) throw DomainError("bandwidth h0 must be positive");
  if (k < 0 || k >= spec.num_clusters() || k2 < 0 || k2 >= spec.num_clusters()) {
    throw RangeError("cluster index out of range");
  }
  const double h0sq = h0 * h0;
  if (k == k2) {
    double log_value = 0.0;
    for (Eigen::Index l = 0; l < spec.dim(); ++l) {
      log_value -= 0.5 * std::log1p(4.0 * spec.cov_eigenvalues(k)(l) / h0sq);
    }
    return std::exp(log_value);
  }

  const Eigen::MatrixXd sum = spec.cluster(k).cov + spec.cluster(k2).cov;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sum);
  const Eigen::VectorXd delta = spec.cluster(k).mean - spec.cluster(k2).mean;
  const Eigen::VectorXd proj = es.eigenvectors().transpose() * delta;
  double log_value = 0.0;
  for (Eigen::Index l = 0; l < spec.dim(); ++l) {
    const double s2 = std::max(es.eigenvalues()(l), 0.0);
    log_value -= proj(l) * proj(l) / (h0sq + 2.0 * s2);
    log_value -= 0.5 * std::log1p(2.0 * s2 / h0sq);
  }
  return std::exp(log_value);
}

double sigma_squared(const GaussianMixtureSpec& spec) {
  double s = 0.0;
  for (int k = 0; k < spec.num_clusters(); ++k) {
    s += spec.cluster(k).size * spec.cov_spectral_radius(k);
  }
  return s / spec.total_size();
}

SeparationReport separation_report(const GaussianMixtureSpec& spec, double h0, double ell) {
  if (!(h0 > 0.0)) throw DomainError("bandwidth h0 must be positive");
  if (!(ell > 0.0)) throw DomainError("Lipschitz constant must be positive");

  SeparationReport r;
  r.ell = ell;
  r.p = std::numeric_limits<double>::infinity();
  r.q = 0.0;
  const int kk = spec.num_clusters();
  for (int k = 0; k < kk; ++k) {
    r.p = std::min(r.p, expected_affinity(spec, k, k, h0));
    for (int k2 = k + 1; k2 < kk; ++k2) r.q = std::max(r.q, expected_affinity(spec, k, k2, h0));
  }
  r.sigma = std::sqrt(sigma_squared(spec));
  r.separated = r.p > r.q;
  if (r.separated) {
    const double gap = r.p - r.q;
    r.t0 = 8.0 * std::sqrt(2.0 * std::log(2.0)) * r.kg * r.sigma * r.ell / gap;
    r.c = 16.0 * std::sqrt(2.0) * r.kg * r.ell * r.sigma / gap;
  } else {
    r.t0 = std::numeric_limits<double>::infinity();
    r.c = std::numeric_limits<double>::infinity();
  }
  return r;
}

bool check_separation_1d(double mu1, double mu2, double s1sq, double s2sq, double h0) {
  if (!(h0 > 0.0)) throw DomainError("bandwidth h0 must be positive");
  if (s1sq < 0.0 || s2sq < 0.0) throw DomainError("variances must be nonnegative");
  const double h0sq = h0 * h0;
  const double s = s1sq + s2sq;
  const double denom = 1.0 + 2.0 * s / h0sq;
  const double worst = std::max(std::log((1.0 + 4.0 * s1sq / h0sq) / denom),
                                std::log((1.0 + 4.0 * s2sq / h0sq) / denom));
  const double diff = mu2 - mu1;
  return diff * diff > 0.5 * (h0sq + 2.0 * s) * worst;
}

}  // namespace sdpembed::gmm
