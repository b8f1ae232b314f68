#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace sdpembed::linalg {

/// Dense symmetric matrix. Construction rejects inputs whose asymmetry exceeds
/// 1e-10 and stores the exact symmetrization (M + M^t)/2.
class SymMatrix {
 public:
  static constexpr double kAsymmetryTolerance = 1e-10;

  explicit SymMatrix(const Eigen::MatrixXd& m);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }

 private:
  Eigen::MatrixXd entries_;
};

/// values sorted descending; column j of vectors is the unit eigenvector of values(j).
/// Every eigenvector has its first coordinate with |x| > 1e-10 positive.
struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

struct Eigenspace {
  double value = 0.0;
  Eigen::MatrixXd basis;  // n x r, orthonormal columns

  Eigen::Index multiplicity() const noexcept { return basis.cols(); }
};

EigenDecomposition eig_sym(const SymMatrix& m);

/// The k largest eigenpairs, descending, same sign convention as eig_sym.
EigenDecomposition top_eigenpairs(const SymMatrix& m, Eigen::Index k);

/// Every eigenpair with eigenvalue strictly above `lower`, descending (may be
/// empty). A positive count_hint (expected number of such pairs) lets small
/// counts use a partial solve; the result does not depend on it.
EigenDecomposition eigenpairs_above(const SymMatrix& m, double lower, Eigen::Index count_hint = 0);

/// Projection onto the PSD cone (negative eigenvalues set to zero).
Eigen::MatrixXd psd_part(const SymMatrix& m, Eigen::Index rank_hint = 0);

/// Top eigenvalue and the basis of every eigenvector whose eigenvalue lies
/// within rel_gap_tol * (1 + |lambda_max|) of it.
Eigenspace lambda_max_eigenspace(const SymMatrix& m, double rel_gap_tol = 1e-8);

/// Largest eigenvalue only.
double lambda_max(const SymMatrix& m);

inline constexpr int kMaxExactInfToOneSize = 20;

/// max over u, v in {-1,1}^n of u^t M v, by enumerating u (v = sign(M^t u)).
double inf_to_one_norm_exact(const Eigen::MatrixXd& m);

/// Alternating sign maximization from `restarts` random starts; a lower bound
/// on inf_to_one_norm_exact.
double inf_to_one_norm_lower(const Eigen::MatrixXd& m, int restarts, std::uint64_t seed);

/// Entrywise l1 norm, sum |m_ij|.
double l1_norm(const Eigen::MatrixXd& m);

/// sum |m_ij|^p
double lp_power_sum(const Eigen::MatrixXd& m, double p);

/// (sum |m_ij|^p)^(1/p)
double lp_quasinorm(const Eigen::MatrixXd& m, double p);

}  // namespace sdpembed::linalg
