#include "sdpembed/embed.hpp"

#include "sdpembed/errors.hpp"
#include "sdpembed/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sdpembed::embed {

namespace {
constexpr double kGapEpsilon = 1e-12;
}

int estimate_k(const Eigen::VectorXd& values, int max_k) {
  const Eigen::Index n = values.size();
  if (n < 2) return 1;
  if (max_k < 1) throw ValidationError("max_k must be positive");
  if (max_k > n) throw ValidationError("max_k must not exceed the number of eigenvalues");
  for (Eigen::Index j = 1; j < n; ++j) {
    if (values(j) > values(j - 1)) throw ValidationError("eigenvalues must be sorted descending");
  }

  const Eigen::Index last = std::min<Eigen::Index>(max_k, n - 1);
  int best_j = 1;
  double best_gap = -1.0;
  for (Eigen::Index j = 1; j <= last; ++j) {
    const double gap = (values(j - 1) - values(j)) / (std::abs(values(j - 1)) + kGapEpsilon);
    if (gap > best_gap) {
      best_gap = gap;
      best_j = static_cast<int>(j);
    }
  }
  return best_j;
}

int default_max_k(Eigen::Index n) {
  return static_cast<int>(std::max<Eigen::Index>(1, (n + 1) / 2));
}

Embedding embed_rows(const Eigen::MatrixXd& z_hat, int k_hat) {
  const linalg::SymMatrix m(z_hat);
  if (k_hat < 1 || k_hat > m.size()) throw RangeError("k_hat must lie in [1, n]");
  Embedding e;
  e.coords = linalg::top_eigenpairs(m, k_hat).vectors;
  e.k_hat = k_hat;
  return e;
}

}  // namespace sdpembed::embed
