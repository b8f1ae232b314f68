#pragma once

#include "sdpembed/affinity.hpp"
#include "sdpembed/gmm_model.hpp"
#include "sdpembed/sdp_solver.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace sdpembed::harness {

/// Random mixture: means ~ N(0, mean_variance I), covariance = B^t B with B
/// entries standard normal, every cluster of cluster_size samples.
struct RandomSpecRecipe {
  int num_clusters = 2;
  int dim = 2;
  int cluster_size = 100;
  double mean_variance = 2.0;
};

gmm::GaussianMixtureSpec random_spec(const RandomSpecRecipe& recipe, std::mt19937_64& rng);

enum class LambdaMode { true_lambda0, grid };
enum class Criterion { bic, aic };

struct ExperimentConfig {
  std::optional<gmm::GaussianMixtureSpec> spec;  // when absent, drawn from recipe per trial
  RandomSpecRecipe recipe;
  int trials = 10;
  std::uint64_t base_seed = 0;
  std::vector<int> dims{50, 100, 150, 200, 250};  // sparsity sweep
  double p_quasi = 0.05;
  LambdaMode lambda_mode = LambdaMode::true_lambda0;
  double lambda_scale = 1.0;  // lambda = scale * lambda0 in true_lambda0 mode
  Criterion criterion = Criterion::bic;
  std::optional<double> h0;  // default: data heuristic (recovery, sparsity) or moment form (concentration)
  sdp::SolverOptions solver;
  int jobs = 1;
  int histogram_bins = 20;
  int inf1_restarts = 50;  // alternating maximization restarts for the inf->1 lower bound

  void validate() const;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  int n = 0;
  int d = 0;
  double lambda = 0.0;
  double pi_n = 0.0;
  double l1_normalized = 0.0;
  double t0 = 0.0;  // infinite when the spec is not separated
  double inf1_lower_normalized = 0.0;
  double sparsity_ratio = 0.0;
  double duality_gap = 0.0;
  long long predicted_edges = 0;
  int k_hat = 0;
  bool converged = false;
  double runtime_ms = 0.0;  // not part of deterministic outputs
};

std::vector<TrialRecord> run_recovery_experiment(const ExperimentConfig& config);

struct ConcentrationPoint {
  double t = 0.0;
  double exceedance = 0.0;   // fraction of trials with norm / n^2 > t
  double bound = 0.0;        // tail bound, clamped to [0, 1]
  double standard_error = 0.0;  // sqrt(b (1 - b) / trials) with b = bound
  bool within = false;       // exceedance <= bound + 3 SE
};

struct ConcentrationSummary {
  int n = 0;
  int trials = 0;
  double h0 = 0.0;
  double ell = 0.0;
  double sigma = 0.0;
  double threshold = 0.0;  // 2 sqrt(2 ln 2) ell sigma
  bool exact_norm = false;
  double mean_norm = 0.0;  // mean of ||A - E A||_{inf->1} / n^2
  double lower_bound_agreement = 0.0;  // fraction of trials where the heuristic hits the exact norm
  std::vector<double> norms;  // per trial, normalized
  std::vector<ConcentrationPoint> grid;
  bool all_within = false;
};

ConcentrationSummary run_concentration_experiment(const ExperimentConfig& config);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

struct SparsityDimension {
  int d = 0;
  std::vector<TrialRecord> trials;
  double median_ratio = 0.0;
  double mean_ratio = 0.0;
  std::vector<HistogramBin> histogram;
};

struct SparsitySummary {
  double p = 0.0;
  std::vector<SparsityDimension> dims;
};

SparsitySummary run_sparsity_experiment(const ExperimentConfig& config);

/// [S_p(original) - S_p(embedded)] / S_p(original) with S_p the l^p power sum.
double sparsity_ratio(const Eigen::MatrixXd& original, const Eigen::MatrixXd& embedded, double p);

/// Affinity of the embedding of z_hat (K from the eigengap rule), with a fresh
/// default bandwidth. Returns the affinity and sets k_hat.
Eigen::MatrixXd embedded_affinity(const Eigen::MatrixXd& z_hat, int& k_hat);

struct LambdaCandidate {
  double lambda = 0.0;
  int num_clusters = 0;
  double log_likelihood = 0.0;
  double score = 0.0;  // BIC or AIC, smaller is better
  bool converged = false;
};

struct LambdaSelection {
  double lambda = 0.0;
  std::vector<LambdaCandidate> table;
};

/// Solve for every candidate, threshold-cluster, fit one Gaussian per cluster
/// (covariance loaded by 1e-6 I) and keep the smallest score; ties go to the
/// smaller lambda.
LambdaSelection select_lambda(const Eigen::MatrixXd& points, const std::vector<double>& candidates,
                              const affinity::AffinityFn& f, const sdp::SolverOptions& options,
                              Criterion criterion = Criterion::bic);

/// 8 log-spaced values n^(1 + i/7), i = 0..7.
std::vector<double> lambda_grid(Eigen::Index n);

/// Score of a clustering under the per-cluster Gaussian fit.
LambdaCandidate score_clustering(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                                 Criterion criterion);

/// Reports. Deterministic outputs exclude runtimes; timings_csv carries them.
std::string records_csv(const std::vector<TrialRecord>& records);
std::string timings_csv(const std::vector<TrialRecord>& records);
std::string recovery_json(const ExperimentConfig& config, const std::vector<TrialRecord>& records);
std::string concentration_json(const ExperimentConfig& config, const ConcentrationSummary& s);
std::string concentration_csv(const ConcentrationSummary& s);
std::string sparsity_json(const ExperimentConfig& config, const SparsitySummary& s);
std::string sparsity_histogram_csv(const SparsitySummary& s);

}  // namespace sdpembed::harness
