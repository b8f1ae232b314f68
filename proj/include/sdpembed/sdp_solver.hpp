#pragma once

#include "sdpembed/affinity.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace sdpembed::sdp {

enum class Method {
  splitting,      // ADMM on every constraint, including Z >= 0
  spectral_dual,  // quasi-Newton on the diag/sum dual, entrywise bounds by clipping
};

Method parse_method(const std::string& name);
std::string method_name(Method m);

struct SolverOptions {
  Method method = Method::splitting;
  double grad_tol = 1e-5;          // stationarity certificate threshold
  int max_iter = 500;              // quasi-Newton iterations per run
  int bfgs_memory = 20;            // L-BFGS pairs and subgradients kept for the certificate
  int restarts = 3;                // perturbed restarts from the best point
  double eigenspace_tol = 1e-8;    // relative multiplicity tolerance for subgradients
  int recovery_refine_iters = 200; // projected-gradient steps when fitting W
  std::uint64_t seed = 0;          // restart perturbations
  double admm_tol = 1e-6;          // residual tolerance per entry scale (splitting)
  int admm_max_iter = 2000;
  double admm_rho = 1.0;           // initial penalty, adapted by residual balancing
  double admm_gap_tol = 1e-3;      // relative certified gap that also ends the splitting run
  double admm_feas_tol = 1e-3;     // ... provided ||Z - X||_F <= admm_feas_tol * n

  void validate() const;
};

/// maximize <A, Z> over PSD Z >= 0 with unit diagonal and <Z, 1 1^t> = lambda.
struct SdpProblem {
  affinity::AffinityMatrix affinity;
  double lambda = 0.0;
  SolverOptions options;

  Eigen::Index size() const noexcept { return affinity.size(); }

  /// Square symmetric affinity, n >= 1, n <= lambda <= n^2, options valid.
  void validate() const;
};

/// Multipliers z_1..z_n for the diagonal constraints and z_{n+1} for the sum.
struct DualPoint {
  Eigen::VectorXd z;
};

struct DualRun {
  DualPoint point;         // best point found
  double value = 0.0;      // theta at point
  double stationarity = 0.0;  // norm of the min-norm convex combination of recent subgradients
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

struct Residuals {
  double min_eigenvalue = 0.0;
  double min_entry = 0.0;
  double max_entry = 0.0;
  double max_diag_deviation = 0.0;  // max |Z_ii - 1|
  double sum_deviation = 0.0;       // |<Z, 1 1^t> - lambda|
};

struct SdpSolution {
  Eigen::MatrixXd z_hat;
  double dual_value = 0.0;
  double primal_value = 0.0;
  double duality_gap = 0.0;
  Residuals residuals;         // of z_hat
  Residuals raw_residuals;     // of n V W V^t before clipping
  Eigen::Index eigenspace_rank = 0;  // top-eigenspace rank, or rank of the PSD iterate
  int iterations = 0;
  bool converged = false;
  double stationarity = 0.0;
};

/// The affine map A + diag(z_1..z_n) + z_{n+1} 1 1^t.
Eigen::MatrixXd dual_operator(const SdpProblem& problem, const DualPoint& zp);

/// theta(z) = n lambda_max(A(z)) - sum_i z_i - lambda z_{n+1}
double dual_value(const SdpProblem& problem, const DualPoint& zp);

/// Element of the subdifferential of theta built from P = V (I/r) V^t on the
/// top eigenspace of A(z).
Eigen::VectorXd dual_subgradient(const SdpProblem& problem, const DualPoint& zp);

/// Limited-memory BFGS with a weak Wolfe line search on theta, subgradient-step
/// fallback and perturbed restarts.
DualRun minimize_dual(const SdpProblem& problem);

/// Primal estimate from the top eigenspace at zstar: fit W on the PSD simplex to
/// the diagonal and sum constraints, then clip to [0, 1] and reset the diagonal.
SdpSolution recover_primal(const SdpProblem& problem, const DualPoint& zstar);

Residuals compute_residuals(const Eigen::MatrixXd& z, double lambda);

/// Upper bound on the SDP value (with Z >= 0) from any symmetric multiplier
/// estimate G: n lambda_max(A - G) + sum_i (G_ii - nu) + lambda nu
/// + sum_{i != j} max(G_ij - nu, 0), minimized over the scalar nu.
double dual_bound(const SdpProblem& problem, const Eigen::MatrixXd& multiplier);

/// ADMM splitting Z = X with Z PSD and X in {0 <= X <= 1, diag 1, sum lambda}.
SdpSolution solve_splitting(const SdpProblem& problem);

/// Dispatches on options.method.
SdpSolution solve(const SdpProblem& problem);

}  // namespace sdpembed::sdp
