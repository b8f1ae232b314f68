#pragma once

#include "sdpembed/gmm_model.hpp"

#include <Eigen/Dense>

#include <string>

namespace sdpembed::affinity {

enum class Kind { gaussian, power_exponential, rational, logistic };

/// Affinity function of a distance h >= 0:
///   gaussian           exp(-(h/h0)^2)
///   power_exponential  exp(-(h/h0)^a)
///   rational           (1 + h/h0)^(-a)
///   logistic           (1 + exp(h/h0))^(-a)
struct AffinityFn {
  Kind kind = Kind::gaussian;
  double h0 = 1.0;
  double a = 2.0;  // ignored for gaussian

  static AffinityFn gaussian(double h0);
  static AffinityFn power_exponential(double h0, double a);
  static AffinityFn rational(double h0, double a);
  static AffinityFn logistic(double h0, double a);
};

Kind parse_kind(const std::string& name);
std::string kind_name(Kind kind);

/// Symmetric n x n matrix of pairwise affinities with entries in [0, 1].
struct AffinityMatrix {
  Eigen::MatrixXd entries;

  Eigen::Index size() const noexcept { return entries.rows(); }
};

double evaluate(const AffinityFn& f, double h);

/// Global Lipschitz constant: exact for gaussian and power_exponential (a >= 1),
/// the bound a/h0 for rational and logistic.
double lipschitz_constant(const AffinityFn& f);

/// 0.5 * sqrt(max column sum of squares of the n x d data matrix).
double default_h0(const Eigen::MatrixXd& points);

/// A_ij = f(||x_i - x_j||_2), computed for i <= j and mirrored.
AffinityMatrix build_matrix(const Eigen::MatrixXd& points, const AffinityFn& f);

/// Closed-form expected Gaussian affinity matrix for the samples of `spec`
/// (cluster order); diagonal fixed to 1.
AffinityMatrix expected_matrix(const gmm::GaussianMixtureSpec& spec, double h0);

}  // namespace sdpembed::affinity
