#include "sdpembed/affinity.hpp"
#include "sdpembed/cluster.hpp"
#include "sdpembed/errors.hpp"
#include "sdpembed/gmm_model.hpp"
#include "sdpembed/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sdpembed;
using harness::ExperimentConfig;

namespace {

gmm::GaussianMixtureSpec separated_spec(int size) {
  return gmm::GaussianMixtureSpec(2, {{Eigen::Vector2d(0.0, 0.0), Eigen::MatrixXd::Identity(2, 2), size},
                                      {Eigen::Vector2d(10.0, 0.0), Eigen::MatrixXd::Identity(2, 2), size}});
}

}  // namespace

TEST_CASE("random spec recipe") {
  std::mt19937_64 rng(1);
  harness::RandomSpecRecipe recipe;
  recipe.dim = 4;
  recipe.cluster_size = 7;
  recipe.num_clusters = 3;
  const auto spec = harness::random_spec(recipe, rng);
  CHECK(spec.dim() == 4);
  CHECK(spec.num_clusters() == 3);
  CHECK(spec.total_size() == 21);
  std::mt19937_64 rng2(1);
  const auto again = harness::random_spec(recipe, rng2);
  CHECK(again.cluster(2).cov == spec.cluster(2).cov);
  recipe.dim = 0;
  CHECK_THROWS_AS(harness::random_spec(recipe, rng), ValidationError);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.trials = 1;
  c.jobs = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.jobs = 1;
  c.dims.clear();
  CHECK_THROWS_AS(harness::run_sparsity_experiment(c), ValidationError);
}

TEST_CASE("sparsity ratio arithmetic") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(6, 6).cwiseAbs();
  CHECK(harness::sparsity_ratio(a, a, 0.05) == 0.0);
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(5, 5);
  const Eigen::MatrixXd small = Eigen::MatrixXd::Constant(5, 5, std::exp(-4.0));
  CHECK(harness::sparsity_ratio(ones, small, 0.05) == doctest::Approx(1.0 - std::exp(-0.2)).epsilon(1e-12));
  CHECK(harness::sparsity_ratio(ones, small, 0.05) == doctest::Approx(0.1813).epsilon(1e-3));
  CHECK_THROWS_AS(harness::sparsity_ratio(Eigen::MatrixXd::Zero(2, 2), ones, 0.05), DomainError);
}

TEST_CASE("lambda grid") {
  const auto g = harness::lambda_grid(10);
  REQUIRE(g.size() == 8);
  CHECK(g.front() == 10.0);
  CHECK(g.back() == 100.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(10.0, 1.0 / 7.0)));
}

TEST_CASE("select_lambda") {
  const auto f = [](const Eigen::MatrixXd& pts) { return affinity::AffinityFn::gaussian(affinity::default_h0(pts)); };
  SUBCASE("single tight cloud prefers one cluster") {
    gmm::GaussianMixtureSpec spec(2, {{Eigen::Vector2d(3.0, 3.0), 0.01 * Eigen::MatrixXd::Identity(2, 2), 20}});
    const auto data = gmm::sample(spec, 4);
    const auto sel = harness::select_lambda(data.points, {20.0, 400.0}, f(data.points), {});
    CHECK(sel.lambda == 400.0);
    CHECK(sel.table.size() == 2);
  }
  SUBCASE("two far clusters prefer lambda0") {
    const auto spec = separated_spec(10);
    const auto data = gmm::sample(spec, 5);
    const auto sel = harness::select_lambda(data.points, {400.0, 200.0}, f(data.points), {});
    CHECK(sel.lambda == 200.0);
  }
  SUBCASE("single candidate and errors") {
    const auto data = gmm::sample(separated_spec(5), 6);
    CHECK(harness::select_lambda(data.points, {50.0}, f(data.points), {}).lambda == 50.0);
    CHECK_THROWS(harness::select_lambda(data.points, {}, f(data.points), {}));
    CHECK_THROWS(harness::select_lambda(data.points, {5.0}, f(data.points), {}));
  }
}

TEST_CASE("score_clustering: BIC prefers the true split on separated data") {
  const auto data = gmm::sample(separated_spec(15), 8);
  const auto truth = harness::score_clustering(data.points, data.labels, harness::Criterion::bic);
  const auto merged = harness::score_clustering(data.points, std::vector<int>(30, 1), harness::Criterion::bic);
  CHECK(truth.score < merged.score);
  CHECK(truth.num_clusters == 2);
  const auto aic = harness::score_clustering(data.points, data.labels, harness::Criterion::aic);
  CHECK(aic.log_likelihood == doctest::Approx(truth.log_likelihood));
  CHECK(aic.score < truth.score);  // ln(30) > 2
}

TEST_CASE("recovery experiment on a separated spec") {
  ExperimentConfig c;
  c.spec = separated_spec(20);
  c.trials = 10;
  c.base_seed = 42;
  const auto records = harness::run_recovery_experiment(c);
  REQUIRE(records.size() == 10);
  int exact = 0;
  for (std::size_t t = 0; t < records.size(); ++t) {
    const auto& r = records[t];
    CHECK(r.seed == 42 + t);
    CHECK(r.n == 40);
    exact += r.pi_n == 0.0;
    CHECK(std::isfinite(r.t0));
    CHECK(r.l1_normalized <= 1.5 * r.t0);
  }
  CHECK(exact >= 9);

  // bit-identical reruns, independent of the worker count
  c.jobs = 3;
  CHECK(harness::records_csv(harness::run_recovery_experiment(c)) == harness::records_csv(records));
}

TEST_CASE("recovery with a smaller mass loses at most about lambda0 - lambda edges") {
  ExperimentConfig c;
  c.spec = separated_spec(15);
  c.trials = 3;
  c.base_seed = 7;
  const auto full = harness::run_recovery_experiment(c);
  c.lambda_scale = 0.8;
  const auto less = harness::run_recovery_experiment(c);
  const double lambda0 = c.spec->lambda0();
  for (std::size_t t = 0; t < full.size(); ++t) {
    const double missing = double(full[t].predicted_edges - less[t].predicted_edges);
    // edges are unordered pairs; lambda counts ordered entries
    CHECK(missing <= 1.2 * (lambda0 - 0.8 * lambda0) / 2.0 + 1.0);
  }
}

TEST_CASE("concentration experiment") {
  SUBCASE("zero variance gives zero deviation") {
    ExperimentConfig c;
    c.spec = gmm::GaussianMixtureSpec(1, {{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Zero(1, 1), 3},
                                          {Eigen::VectorXd::Constant(1, 1.0), Eigen::MatrixXd::Zero(1, 1), 3}});
    c.trials = 5;
    const auto s = harness::run_concentration_experiment(c);
    for (double v : s.norms) CHECK(std::abs(v) <= 1e-12);
  }
  SUBCASE("n = 12, two clusters") {
    ExperimentConfig c;
    c.spec = gmm::GaussianMixtureSpec(2, {{Eigen::Vector2d(0.0, 0.0), Eigen::MatrixXd::Identity(2, 2), 6},
                                          {Eigen::Vector2d(3.0, 0.0), Eigen::MatrixXd::Identity(2, 2), 6}});
    c.trials = 100;
    c.base_seed = 3;
    const auto s = harness::run_concentration_experiment(c);
    CHECK(s.exact_norm);
    CHECK(s.grid.size() == 5);
    CHECK(s.all_within);
    CHECK(s.lower_bound_agreement >= 0.95);
    for (const auto& p : s.grid) CHECK(p.t > s.threshold);
  }
}

TEST_CASE("sparsity experiment is deterministic and summarizes each dimension") {
  ExperimentConfig c;
  c.recipe.cluster_size = 15;
  c.dims = {3, 6};
  c.trials = 3;
  c.base_seed = 11;
  c.histogram_bins = 4;
  const auto s = harness::run_sparsity_experiment(c);
  REQUIRE(s.dims.size() == 2);
  for (const auto& d : s.dims) {
    CHECK(d.trials.size() == 3);
    int total = 0;
    for (const auto& b : d.histogram) total += b.count;
    CHECK(total == 3);
  }
  CHECK(harness::sparsity_json(c, s) == harness::sparsity_json(c, harness::run_sparsity_experiment(c)));
}

TEST_CASE("embedded affinity of an exact cluster matrix") {
  const Eigen::MatrixXd z = cluster::cluster_matrix(cluster::Labeling{{1, 1, 2, 2, 2}}).entries;
  int k = 0;
  const Eigen::MatrixXd a = harness::embedded_affinity(z, k);
  CHECK(k == 2);
  CHECK(a(0, 1) == 1.0);
  CHECK(a(2, 4) == 1.0);
  CHECK(a(0, 2) < 1.0);
}
