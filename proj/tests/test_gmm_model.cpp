#include "sdpembed/affinity.hpp"
#include "sdpembed/errors.hpp"
#include "sdpembed/gmm_model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sdpembed;
using gmm::ClusterSpec;
using gmm::GaussianMixtureSpec;

namespace {

GaussianMixtureSpec two_point_spec(double mu1, double mu2, double s1sq, double s2sq, int n1 = 2,
                                   int n2 = 3) {
  return GaussianMixtureSpec(1, {{Eigen::VectorXd::Constant(1, mu1), Eigen::MatrixXd::Constant(1, 1, s1sq), n1},
                                 {Eigen::VectorXd::Constant(1, mu2), Eigen::MatrixXd::Constant(1, 1, s2sq), n2}});
}

Eigen::MatrixXd random_cov(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = normal(rng);
  return b.transpose() * b / d;
}

}  // namespace

TEST_CASE("spec rejects bad covariances and sizes") {
  const Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd asym{{1.0, 0.5}, {0.4, 1.0}};
  CHECK_THROWS_AS(GaussianMixtureSpec(2, {{mu, asym, 3}}), ValidationError);
  Eigen::MatrixXd neg{{1.0, 0.0}, {0.0, -1e-6}};
  CHECK_THROWS_AS(GaussianMixtureSpec(2, {{mu, neg, 3}}), ValidationError);
  // tiny negative eigenvalues are clamped
  Eigen::MatrixXd tiny{{1.0, 0.0}, {0.0, -1e-11}};
  GaussianMixtureSpec ok(2, {{mu, tiny, 3}});
  CHECK(ok.cov_eigenvalues(0).minCoeff() == 0.0);
  CHECK_THROWS_AS(GaussianMixtureSpec(2, {{mu, Eigen::MatrixXd::Identity(2, 2), 1}}), ValidationError);
  CHECK_THROWS_AS(GaussianMixtureSpec(2, {}), ValidationError);
  CHECK_THROWS_AS(GaussianMixtureSpec(2, {{Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(2, 2), 3}}),
                  ValidationError);
  CHECK_THROWS_AS(ok.cluster(1), RangeError);
}

TEST_CASE("sample: degenerate covariance gives identical rows") {
  GaussianMixtureSpec spec(2, {{Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(2, 2), 3}});
  const auto data = gmm::sample(spec, 7);
  CHECK(data.points.rows() == 3);
  CHECK(data.points.isZero(0.0));
  CHECK(data.labels == std::vector<int>{1, 1, 1});
}

TEST_CASE("sample: labels follow cluster order and the draw is seeded") {
  const auto spec = two_point_spec(0.0, 5.0, 1.0, 2.0);
  const auto a = gmm::sample(spec, 11);
  const auto b = gmm::sample(spec, 11);
  const auto c = gmm::sample(spec, 12);
  CHECK(a.labels == std::vector<int>{1, 1, 2, 2, 2});
  CHECK(a.points == b.points);
  CHECK(a.points != c.points);
  CHECK(spec.lambda0() == 13.0);
}

TEST_CASE("sample: moments of a large standard normal draw") {
  GaussianMixtureSpec spec(1, {{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), 100000}});
  const auto data = gmm::sample(spec, 3);
  const double mean = data.points.mean();
  const double var = (data.points.array() - mean).square().sum() / (data.points.rows() - 1);
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(1e5));
  CHECK(std::abs(var - 1.0) <= 0.05);
}

TEST_CASE("sample: covariance of a correlated draw") {
  Eigen::MatrixXd cov{{2.0, 0.8}, {0.8, 1.0}};
  GaussianMixtureSpec spec(2, {{Eigen::Vector2d(1.0, -1.0), cov, 200000}});
  const auto data = gmm::sample(spec, 5);
  const Eigen::RowVectorXd mean = data.points.colwise().mean();
  const Eigen::MatrixXd c = data.points.rowwise() - mean;
  const Eigen::MatrixXd emp = c.transpose() * c / (c.rows() - 1);
  CHECK((emp - cov).cwiseAbs().maxCoeff() < 0.03);
  CHECK((mean.transpose() - Eigen::Vector2d(1.0, -1.0)).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("gaussian quadratic Laplace transform") {
  CHECK(gmm::gaussian_quadratic_laplace(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3), 0.0) == 1.0);
  CHECK(gmm::gaussian_quadratic_laplace(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), -0.5) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(gmm::gaussian_quadratic_laplace(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), 0.1),
                  DomainError);

  // Monte Carlo: E exp(t X^2), X ~ N(1, 1), t = -0.3
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(1.0, 1.0);
  const int draws = 1000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = normal(rng);
    const double y = std::exp(-0.3 * x * x);
    s += y;
    s2 += y * y;
  }
  const double mean = s / draws;
  const double se = std::sqrt((s2 / draws - mean * mean) / draws);
  const double exact = gmm::gaussian_quadratic_laplace(Eigen::VectorXd::Constant(1, 1.0),
                                                       Eigen::MatrixXd::Constant(1, 1, 1.0), -0.3);
  CHECK(std::abs(mean - exact) <= 4.0 * se);
}

TEST_CASE("expected affinity closed forms") {
  GaussianMixtureSpec zero(1, {{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Zero(1, 1), 3},
                               {Eigen::VectorXd::Constant(1, 2.0), Eigen::MatrixXd::Zero(1, 1), 2}});
  CHECK(gmm::expected_affinity(zero, 0, 0, 1.5) == 1.0);
  CHECK(gmm::expected_affinity(zero, 0, 1, 1.5) == doctest::Approx(std::exp(-4.0 / 2.25)).epsilon(1e-14));

  const double h0 = 3.0;
  const auto half = two_point_spec(0.0, 1.0, h0 * h0 / 4.0, 1.0);
  CHECK(gmm::expected_affinity(half, 0, 0, h0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(gmm::expected_affinity(half, 0, 2, h0), RangeError);
  CHECK_THROWS_AS(gmm::expected_affinity(half, 0, 1, 0.0), DomainError);
}

TEST_CASE("one-dimensional cross-cluster formula agrees with the general one") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double mu1 = u(rng) - 1.5, mu2 = u(rng), s1 = u(rng), s2 = u(rng), h0 = 0.2 + u(rng);
    const auto spec = two_point_spec(mu1, mu2, s1, s2);
    const double s = s1 + s2;
    const double direct = std::exp(-(mu2 - mu1) * (mu2 - mu1) / (h0 * h0 + 2.0 * s)) /
                          std::sqrt(1.0 + 2.0 * s / (h0 * h0));
    CHECK(gmm::expected_affinity(spec, 0, 1, h0) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("expected affinity matches Monte Carlo pair means") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(1, 5), kk(1, 3);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = dim(rng), k = kk(rng);
    std::vector<ClusterSpec> clusters;
    for (int c = 0; c < k; ++c) {
      Eigen::VectorXd mu(d);
      for (int l = 0; l < d; ++l) mu(l) = 1.5 * normal(rng);
      clusters.push_back({mu, random_cov(d, rng), 2});
    }
    const GaussianMixtureSpec spec(d, clusters);
    const double h0 = 1.0 + 2.0 * std::abs(normal(rng));
    const auto f = affinity::AffinityFn::gaussian(h0);
    for (int a = 0; a < k; ++a) {
      for (int b = a; b < k; ++b) {
        // independent pairs: x ~ cluster a, y ~ cluster b
        const Eigen::MatrixXd la = spec.cov_eigenvectors(a) * spec.cov_eigenvalues(a).cwiseSqrt().asDiagonal();
        const Eigen::MatrixXd lb = spec.cov_eigenvectors(b) * spec.cov_eigenvalues(b).cwiseSqrt().asDiagonal();
        const int pairs = 100000;
        double s = 0.0, s2 = 0.0;
        Eigen::VectorXd xi(d), eta(d);
        for (int i = 0; i < pairs; ++i) {
          for (int l = 0; l < d; ++l) {
            xi(l) = normal(rng);
            eta(l) = normal(rng);
          }
          const Eigen::VectorXd x = spec.cluster(a).mean + la * xi;
          const Eigen::VectorXd y = spec.cluster(b).mean + lb * eta;
          const double v = affinity::evaluate(f, (x - y).norm());
          s += v;
          s2 += v * v;
        }
        const double mean = s / pairs;
        const double se = std::sqrt(std::max(s2 / pairs - mean * mean, 0.0) / pairs);
        const double exact = gmm::expected_affinity(spec, a, b, h0);
        CHECK(exact > 0.0);
        CHECK(exact <= 1.0);
        CHECK(exact == doctest::Approx(gmm::expected_affinity(spec, b, a, h0)).epsilon(1e-13));
        CHECK(std::abs(mean - exact) <= 4.0 * se + 1e-12);
      }
    }
  }
}

TEST_CASE("separation report constants") {
  SUBCASE("single cluster") {
    GaussianMixtureSpec spec(1, {{Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1), 4}});
    const auto r = gmm::separation_report(spec, 1.0, 1.0);
    CHECK(r.q == 0.0);
    CHECK(r.separated);
  }
  SUBCASE("zero variance") {
    const auto spec = two_point_spec(0.0, 2.0, 0.0, 0.0);
    const auto r = gmm::separation_report(spec, 1.0, 0.5);
    CHECK(r.p == 1.0);
    CHECK(r.q == doctest::Approx(std::exp(-4.0)));
    CHECK(r.separated);
  }
  SUBCASE("sigma squared and t0, c") {
    const auto spec = two_point_spec(0.0, 6.0, 1.0, 4.0);
    CHECK(gmm::sigma_squared(spec) == doctest::Approx(2.8).epsilon(1e-14));
    const double h0 = 2.0, ell = 0.7;
    const auto r = gmm::separation_report(spec, h0, ell);
    REQUIRE(r.separated);
    const double sigma = std::sqrt(2.8);
    CHECK(r.t0 == doctest::Approx(8.0 * std::sqrt(2.0 * std::log(2.0)) * 1.8 * sigma * ell / (r.p - r.q)));
    CHECK(r.c == doctest::Approx(16.0 * std::sqrt(2.0) * 1.8 * ell * sigma / (r.p - r.q)));
    CHECK(r.p == doctest::Approx(std::min(gmm::expected_affinity(spec, 0, 0, h0), gmm::expected_affinity(spec, 1, 1, h0))));
  }
  SUBCASE("not separated gives infinite constants") {
    const auto spec = two_point_spec(0.0, 0.0, 1.0, 3.0);
    const auto r = gmm::separation_report(spec, 1.0, 1.0);
    CHECK_FALSE(r.separated);
    CHECK(std::isinf(r.t0));
    CHECK(std::isinf(r.c));
  }
  SUBCASE("t0 decreases as the means move apart") {
    double prev = std::numeric_limits<double>::infinity();
    for (double gap = 0.5; gap <= 6.0; gap += 0.5) {
      const auto r = gmm::separation_report(two_point_spec(0.0, gap, 1.0, 1.0), 2.0, 1.0);
      REQUIRE(r.separated);
      CHECK(r.t0 < prev);
      prev = r.t0;
    }
  }
}

TEST_CASE("one-dimensional separation test agrees with the report") {
  CHECK(gmm::check_separation_1d(0.0, 0.1, 1.0, 1.0, 1.0));
  CHECK_FALSE(gmm::check_separation_1d(1.0, 1.0, 1.0, 2.0, 1.0));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double mu1 = u(rng), mu2 = u(rng), s1 = u(rng), s2 = u(rng), h0 = 0.1 + u(rng);
    const bool report = gmm::separation_report(two_point_spec(mu1, mu2, s1, s2), h0, 1.0).separated;
    CHECK(gmm::check_separation_1d(mu1, mu2, s1, s2, h0) == report);
  }
}
