#include "sdpembed/cluster.hpp"

#include "sdpembed/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

namespace sdpembed::cluster {

namespace {

struct DisjointSets {
  std::vector<Eigen::Index> parent;

  explicit DisjointSets(Eigen::Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  }
  Eigen::Index find(Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      auto& p = parent[static_cast<std::size_t>(i)];
      p = parent[static_cast<std::size_t>(p)];
      i = p;
    }
    return i;
  }
  void unite(Eigen::Index a, Eigen::Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller index becomes the root so roots are smallest members.
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
  }
};

// Components numbered 1, 2, ... in order of their smallest member.
Labeling number_components(DisjointSets& sets, Eigen::Index n) {
  Labeling out;
  out.labels.resize(static_cast<std::size_t>(n));
  std::vector<int> label_of_root(static_cast<std::size_t>(n), 0);
  int next = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto root = static_cast<std::size_t>(sets.find(i));
    if (label_of_root[root] == 0) label_of_root[root] = ++next;
    out.labels[static_cast<std::size_t>(i)] = label_of_root[root];
  }
  return out;
}

void require_same_shape(const Eigen::MatrixXd& z_hat, const ClusterMatrix& zbar) {
  if (z_hat.rows() != z_hat.cols()) throw ValidationError("estimate must be square");
  if (z_hat.rows() != zbar.size() || zbar.entries.cols() != zbar.size()) {
    throw ValidationError("estimate and cluster matrix differ in size");
  }
}

}  // namespace

int Labeling::num_clusters() const {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
}

void Labeling::validate() const {
  if (labels.empty()) throw ValidationError("labeling is empty");
  const int k = num_clusters();
  std::vector<bool> seen(static_cast<std::size_t>(std::max(k, 0)) + 1, false);
  for (int l : labels) {
    if (l < 1) throw ValidationError("labels must be >= 1, got " + std::to_string(l));
    seen[static_cast<std::size_t>(l)] = true;
  }
  for (int l = 1; l <= k; ++l) {
    if (!seen[static_cast<std::size_t>(l)]) {
      throw ValidationError("label " + std::to_string(l) + " is unused (labels must cover 1..K)");
    }
  }
}

ClusterMatrix cluster_matrix(const Labeling& labels) {
  labels.validate();
  const Eigen::Index n = labels.size();
  ClusterMatrix z;
  z.entries.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      z.entries(i, j) =
          labels.labels[static_cast<std::size_t>(i)] == labels.labels[static_cast<std::size_t>(j)]
              ? 1.0
              : 0.0;
    }
  }
  return z;
}

double lambda0(const Labeling& labels) {
  labels.validate();
  std::vector<double> counts(static_cast<std::size_t>(labels.num_clusters()) + 1, 0.0);
  for (int l : labels.labels) counts[static_cast<std::size_t>(l)] += 1.0;
  double s = 0.0;
  for (double c : counts) s += c * c;
  return s;
}

Labeling threshold_graph_clusters(const Eigen::MatrixXd& z_hat) {
  if (z_hat.rows() != z_hat.cols()) throw ValidationError("estimate must be square");
  const Eigen::Index n = z_hat.rows();
  DisjointSets sets(n);
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      // Either triangle counts, so a slightly asymmetric input still gives an undirected graph.
      if (z_hat(i, j) > 0.5 || z_hat(j, i) > 0.5) sets.unite(i, j);
    }
  }
  return number_components(sets, n);
}

Labeling mst_clusters(const Eigen::MatrixXd& points, int k) {
  const Eigen::Index n = points.rows();
  if (n < 1) throw ValidationError("mst_clusters needs at least one point");
  if (k < 1 || k > n) {
    throw RangeError("mst_clusters: k must lie in [1, n] = [1, " + std::to_string(n) + "]");
  }

  // Prim, O(n^2); ties in the frontier resolved toward the smaller vertex index.
  struct Edge {
    double w;
    Eigen::Index a;
    Eigen::Index b;
  };
  std::vector<Edge> tree;
  tree.reserve(static_cast<std::size_t>(n - 1));
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<Eigen::Index> from(static_cast<std::size_t>(n), 0);
  best[0] = 0.0;
  for (Eigen::Index step = 0; step < n; ++step) {
    Eigen::Index u = -1;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (!in[static_cast<std::size_t>(v)] &&
          (u < 0 || best[static_cast<std::size_t>(v)] < best[static_cast<std::size_t>(u)])) {
        u = v;
      }
    }
    in[static_cast<std::size_t>(u)] = true;
    if (step > 0) {
      const Eigen::Index p = from[static_cast<std::size_t>(u)];
      tree.push_back({best[static_cast<std::size_t>(u)], std::min(p, u), std::max(p, u)});
    }
    for (Eigen::Index v = 0; v < n; ++v) {
      if (in[static_cast<std::size_t>(v)]) continue;
      const double d = (points.row(u) - points.row(v)).norm();
      auto& bv = best[static_cast<std::size_t>(v)];
      auto& fv = from[static_cast<std::size_t>(v)];
      if (d < bv || (d == bv && u < fv)) {
        bv = d;
        fv = u;
      }
    }
  }

  // Heaviest first; equal weights ordered lexicographically by (a, b).
  std::sort(tree.begin(), tree.end(), [](const Edge& x, const Edge& y) {
    if (x.w != y.w) return x.w > y.w;
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  DisjointSets sets(n);
  for (std::size_t e = static_cast<std::size_t>(k - 1); e < tree.size(); ++e) {
    sets.unite(tree[e].a, tree[e].b);
  }
  return number_components(sets, n);
}

double edge_error_rate(const Eigen::MatrixXd& z_hat, const ClusterMatrix& zbar) {
  require_same_shape(z_hat, zbar);
  const Eigen::Index n = z_hat.rows();
  if (n < 2) return 0.0;
  long long wrong = 0;
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const bool predicted = z_hat(i, j) > 0.5;
      const bool truth = zbar.entries(i, j) > 0.5;
      wrong += predicted != truth ? 1 : 0;
    }
  }
  const auto nd = static_cast<double>(n);
  return 2.0 * static_cast<double>(wrong) / (nd * (nd - 1.0));
}

double l1_error_normalized(const Eigen::MatrixXd& z_hat, const ClusterMatrix& zbar) {
  require_same_shape(z_hat, zbar);
  const auto nd = static_cast<double>(z_hat.rows());
  if (nd == 0.0) return 0.0;
  return (z_hat - zbar.entries).cwiseAbs().sum() / (nd * nd);
}

double recovery_tail_bound(const gmm::SeparationReport& report, double t, int n) {
  if (!report.separated) throw DomainError("recovery bound requires a separated model (p > q)");
  if (n < 1) throw ValidationError("n must be positive");
  if (!(t > report.t0)) throw DomainError("recovery bound is vacuous for t <= t0");
  if (report.c == 0.0) return 0.0;
  const double r = (t - report.t0) / report.c;
  return std::min(1.0, 2.0 * std::exp(-r * r * n));
}

double concentration_bound(double t, double ell, double sigma, int n) {
  if (n < 1) throw ValidationError("n must be positive");
  const double shift = 2.0 * std::sqrt(2.0 * std::log(2.0)) * ell * sigma;
  if (!(t > shift)) throw DomainError("concentration bound requires t > 2 sqrt(2 ln 2) ell sigma");
  const double scale = 32.0 * ell * ell * sigma * sigma;
  if (scale == 0.0) return 0.0;
  const double gap = t - shift;
  return std::min(1.0, 2.0 * std::exp(-gap * gap / scale * n));
}

long long predicted_edges(const Eigen::MatrixXd& z_hat) {
  long long count = 0;
  for (Eigen::Index j = 1; j < z_hat.cols(); ++j) {
    for (Eigen::Index i = 0; i < std::min(j, z_hat.rows()); ++i) count += z_hat(i, j) > 0.5 ? 1 : 0;
  }
  return count;
}

}  // namespace sdpembed::cluster
