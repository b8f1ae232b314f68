#include "sdpembed/cluster.hpp"
#include "sdpembed/errors.hpp"
#include "sdpembed/gmm_model.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

using namespace sdpembed;
using cluster::Labeling;

namespace {

// Same partition up to renumbering.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

}  // namespace

TEST_CASE("labeling validation") {
  const auto validate = [](std::vector<int> labels) { Labeling{std::move(labels)}.validate(); };
  CHECK_THROWS_AS(validate({1, 3}), ValidationError);
  CHECK_THROWS_AS(validate({0, 1}), ValidationError);
  CHECK_THROWS_AS(validate({}), ValidationError);
  CHECK_NOTHROW(validate({2, 1, 2}));
  CHECK(Labeling{{2, 1, 2}}.num_clusters() == 2);
}

TEST_CASE("cluster matrix and lambda0") {
  CHECK(cluster::cluster_matrix(Labeling{{1, 1, 2}}).entries ==
        Eigen::Matrix3d{{1, 1, 0}, {1, 1, 0}, {0, 0, 1}}.cast<double>());
  CHECK(cluster::cluster_matrix(Labeling{{1, 1, 1, 1}}).entries == Eigen::MatrixXd::Ones(4, 4));
  CHECK(cluster::lambda0(Labeling{{1, 1, 2, 2, 2}}) == 13.0);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> labels(12);
    for (auto& l : labels) l = 1 + int(rng() % 4);
    // make labels cover 1..K
    std::map<int, int> renum;
    for (auto& l : labels) l = renum.emplace(l, int(renum.size()) + 1).first->second;
    const Eigen::MatrixXd z = cluster::cluster_matrix(Labeling{labels}).entries;
    CHECK(z == z.transpose());
    CHECK(z.diagonal() == Eigen::VectorXd::Ones(12));
    CHECK(z.sum() == cluster::lambda0(Labeling{labels}));
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j)
        for (int k = 0; k < 12; ++k)
          if (z(i, j) == 1.0 && z(j, k) == 1.0) CHECK(z(i, k) == 1.0);
    CHECK(same_partition(cluster::threshold_graph_clusters(z).labels, labels));
  }
}

TEST_CASE("threshold graph clusters") {
  Eigen::MatrixXd z = oracle::block_ones({2, 3});
  CHECK(cluster::threshold_graph_clusters(z).labels == std::vector<int>{1, 1, 2, 2, 2});
  Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(4, 4, 0.4);
  flat.diagonal().setOnes();
  CHECK(cluster::threshold_graph_clusters(flat).labels == std::vector<int>{1, 2, 3, 4});
  z(1, 2) = z(2, 1) = 0.6;
  CHECK(cluster::threshold_graph_clusters(z).labels == std::vector<int>{1, 1, 1, 1, 1});
  Eigen::MatrixXd half = Eigen::MatrixXd::Constant(2, 2, 0.5);
  CHECK(cluster::threshold_graph_clusters(half).labels == std::vector<int>{1, 2});
  // numbering follows the smallest member
  Eigen::MatrixXd inter = Eigen::MatrixXd::Identity(4, 4);
  inter(0, 2) = inter(2, 0) = 1.0;
  inter(1, 3) = inter(3, 1) = 1.0;
  CHECK(cluster::threshold_graph_clusters(inter).labels == std::vector<int>{1, 2, 1, 2});
}

TEST_CASE("MST clusters") {
  Eigen::MatrixXd line(4, 1);
  line << 0.0, 1.0, 10.0, 11.0;
  CHECK(cluster::mst_clusters(line, 2).labels == std::vector<int>{1, 1, 2, 2});
  CHECK(cluster::mst_clusters(line, 1).labels == std::vector<int>{1, 1, 1, 1});
  CHECK(cluster::mst_clusters(line, 4).labels == std::vector<int>{1, 2, 3, 4});
  CHECK_THROWS_AS(cluster::mst_clusters(line, 5), RangeError);
  CHECK_THROWS_AS(cluster::mst_clusters(line, 0), RangeError);

  // isometry invariance on random point clouds
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd pts(25, 3);
    for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = normal(rng);
    Eigen::MatrixXd g(3, 3);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    const Eigen::RowVector3d shift(normal(rng), normal(rng), normal(rng));
    const Eigen::MatrixXd moved = (pts * q).rowwise() + shift;
    const int k = 1 + trial % 5;
    CHECK(cluster::mst_clusters(pts, k).labels == cluster::mst_clusters(moved, k).labels);
  }

  // brute-force single linkage oracle: merge closest pairs until k components
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 12, k = 1 + trial % 4;
    Eigen::MatrixXd pts(n, 2);
    for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = normal(rng);
    std::vector<int> comp(n);
    for (int i = 0; i < n; ++i) comp[i] = i;
    int count = n;
    while (count > k) {
      double best = INFINITY;
      int bi = -1, bj = -1;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (comp[i] != comp[j] && (pts.row(i) - pts.row(j)).norm() < best) {
            best = (pts.row(i) - pts.row(j)).norm();
            bi = i;
            bj = j;
          }
      const int from = comp[bj];
      for (auto& c : comp)
        if (c == from) c = comp[bi];
      --count;
    }
    CHECK(same_partition(cluster::mst_clusters(pts, k).labels, comp));
  }
}

TEST_CASE("edge error rate and l1 error") {
  const auto zbar = cluster::cluster_matrix(Labeling{{1, 1, 2, 2, 2}});
  CHECK(cluster::edge_error_rate(zbar.entries, zbar) == 0.0);
  Eigen::MatrixXd flip = zbar.entries;
  flip(0, 4) = flip(4, 0) = 1.0;
  CHECK(cluster::edge_error_rate(flip, zbar) == doctest::Approx(0.1));
  Eigen::MatrixXd inv = Eigen::MatrixXd::Ones(5, 5) - zbar.entries;
  inv.diagonal().setOnes();
  CHECK(cluster::edge_error_rate(inv, zbar) == 1.0);

  CHECK(cluster::l1_error_normalized(zbar.entries, zbar) == 0.0);
  const auto ones = cluster::cluster_matrix(Labeling{{1, 1, 1}});
  CHECK(cluster::l1_error_normalized(Eigen::MatrixXd::Zero(3, 3), ones) == 1.0);
  Eigen::MatrixXd out = zbar.entries;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (zbar.entries(i, j) == 0.0) out(i, j) = 0.1;
  CHECK(cluster::l1_error_normalized(out, zbar) == doctest::Approx(0.048));
  CHECK_THROWS_AS(cluster::edge_error_rate(Eigen::MatrixXd::Zero(4, 4), zbar), ValidationError);

  // pi_n <= 2 n / (n - 1) * l1 on random estimates
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd z(5, 5);
    for (int i = 0; i < 5; ++i) {
      z(i, i) = 1.0;
      for (int j = 0; j < i; ++j) z(i, j) = z(j, i) = u(rng);
    }
    CHECK(cluster::edge_error_rate(z, zbar) <= 2.0 * 5.0 / 4.0 * cluster::l1_error_normalized(z, zbar) + 1e-12);
  }
  CHECK(cluster::predicted_edges(zbar.entries) == 4);
}

TEST_CASE("recovery and concentration bounds") {
  gmm::SeparationReport r;
  r.separated = true;
  r.t0 = 0.2;
  r.c = 0.5;
  CHECK(cluster::recovery_tail_bound(r, 0.2 + 1e-9, 10) == 1.0);
  CHECK(cluster::recovery_tail_bound(r, 0.7, 10) == doctest::Approx(2.0 * std::exp(-10.0)));
  const double a = std::pow((0.6 - 0.2) / 0.5, 2) * 20;
  CHECK(cluster::recovery_tail_bound(r, 0.6, 40) == doctest::Approx(2.0 * std::exp(-2.0 * a)));
  CHECK(cluster::recovery_tail_bound(r, 0.6, 40) ==
        doctest::Approx(std::pow(cluster::recovery_tail_bound(r, 0.6, 20), 2) / 2.0));
  CHECK_THROWS_AS(cluster::recovery_tail_bound(r, 0.2, 10), DomainError);
  r.separated = false;
  CHECK_THROWS_AS(cluster::recovery_tail_bound(r, 1.0, 10), DomainError);

  const double ell = 0.8, sigma = 0.5;
  const double t = 2.0 * std::sqrt(2.0 * std::log(2.0)) * ell * sigma + 0.3;
  CHECK(cluster::concentration_bound(t, ell, sigma, 12) ==
        doctest::Approx(std::min(1.0, 2.0 * std::exp(-0.09 / (32.0 * ell * ell * sigma * sigma) * 12))));
}
