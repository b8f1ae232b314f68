#include "sdpembed/linalg.hpp"

#include "sdpembed/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace sdpembed::linalg {

namespace {

// First coordinate with |x| above this is made positive.
constexpr double kSignThreshold = 1e-10;

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double x = vectors(i, j);
      if (std::abs(x) > kSignThreshold) {
        if (x < 0.0) vectors.col(j) *= -1.0;
        break;
      }
    }
  }
}

// Eigenpairs with 1-based ascending indices [il, iu], returned descending.
EigenDecomposition dsyevr_range(const Eigen::MatrixXd& m, lapack_int il, lapack_int iu) {
  const auto n = static_cast<lapack_int>(m.rows());
  Eigen::MatrixXd work = m;
  const lapack_int want = iu - il + 1;
  std::vector<double> w(static_cast<std::size_t>(n));
  Eigen::MatrixXd z(n, want);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max<lapack_int>(want, 1)));
  lapack_int found = 0;
  const char range = (il == 1 && iu == n) ? 'A' : 'I';
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', range, 'L', n, work.data(), n, 0.0, 0.0, il, iu, 0.0,
                     &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != want) {
    throw NumericalError("symmetric eigensolver failed (LAPACK info " + std::to_string(info) +
                         ", " + std::to_string(found) + " of " + std::to_string(want) +
                         " eigenpairs)");
  }
  EigenDecomposition out;
  out.values.resize(want);
  out.vectors.resize(n, want);
  for (lapack_int j = 0; j < want; ++j) {
    out.values(j) = w[static_cast<std::size_t>(want - 1 - j)];
    out.vectors.col(j) = z.col(want - 1 - j);
  }
  fix_signs(out.vectors);
  return out;
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw ValidationError("symmetric matrix must be square, got " + std::to_string(m.rows()) +
                          "x" + std::to_string(m.cols()));
  }
  const double asym = m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= kAsymmetryTolerance)) {
    throw ValidationError("matrix is not symmetric (max |m_ij - m_ji| = " + std::to_string(asym) +
                          ")");
  }
  entries_ = 0.5 * (m + m.transpose());
}

EigenDecomposition eig_sym(const SymMatrix& m) {
  const auto n = static_cast<lapack_int>(m.size());
  if (n < 1) throw ValidationError("eig_sym requires n >= 1");
  // Divide and conquer is a little faster than MRRR for the full spectrum.
  Eigen::MatrixXd z = m.entries();
  std::vector<double> w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, z.data(), n, w.data());
  if (info != 0) {
    throw NumericalError("symmetric eigensolver failed (LAPACK info " + std::to_string(info) + ")");
  }
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (lapack_int j = 0; j < n; ++j) {
    out.values(j) = w[static_cast<std::size_t>(n - 1 - j)];
    out.vectors.col(j) = z.col(n - 1 - j);
  }
  fix_signs(out.vectors);
  return out;
}

EigenDecomposition top_eigenpairs(const SymMatrix& m, Eigen::Index k) {
  const auto n = static_cast<lapack_int>(m.size());
  if (n < 1) throw ValidationError("top_eigenpairs requires n >= 1");
  if (k < 1 || k > n) throw RangeError("top_eigenpairs: k out of range [1, n]");
  return dsyevr_range(m.entries(), n - static_cast<lapack_int>(k) + 1, n);
}

EigenDecomposition eigenpairs_above(const SymMatrix& m, double lower, Eigen::Index count_hint) {
  const Eigen::Index n = m.size();
  if (n < 1) throw ValidationError("eigenpairs_above requires n >= 1");
  auto keep_above = [lower](const EigenDecomposition& e) {
    Eigen::Index r = 0;
    while (r < e.values.size() && e.values(r) > lower) ++r;
    return EigenDecomposition{e.values.head(r), e.vectors.leftCols(r)};
  };
  // Bisection for a few top pairs beats the full MRRR solve only while the
  // count is small; otherwise (or if the guess was too small) solve fully.
  const Eigen::Index k = count_hint + 8;
  if (count_hint > 0 && 4 * k < n) {
    EigenDecomposition top = top_eigenpairs(m, k);
    if (top.values(k - 1) <= lower) return keep_above(top);
  }
  return keep_above(eig_sym(m));
}

Eigen::MatrixXd psd_part(const SymMatrix& m, Eigen::Index rank_hint) {
  const EigenDecomposition pos = eigenpairs_above(m, 0.0, rank_hint);
  return pos.vectors * pos.values.asDiagonal() * pos.vectors.transpose();
}

Eigenspace lambda_max_eigenspace(const SymMatrix& m, double rel_gap_tol) {
  if (!(rel_gap_tol > 0.0)) throw DomainError("lambda_max_eigenspace: gap tolerance must be > 0");
  const Eigen::Index n = m.size();
  Eigen::Index k = std::min<Eigen::Index>(n, 4);
  for (;;) {
    EigenDecomposition top = top_eigenpairs(m, k);
    const double lmax = top.values(0);
    const double tol = rel_gap_tol * (1.0 + std::abs(lmax));
    Eigen::Index r = 1;
    while (r < k && lmax - top.values(r) <= tol) ++r;
    if (r < k || k == n) {
      return Eigenspace{lmax, top.vectors.leftCols(r)};
    }
    k = std::min(n, 2 * k);
  }
}

double lambda_max(const SymMatrix& m) {
  return top_eigenpairs(m, 1).values(0);
}

double inf_to_one_norm_exact(const Eigen::MatrixXd& m) {
  const Eigen::Index rows = m.rows();
  if (rows > kMaxExactInfToOneSize) {
    throw SizeError("exact inf->1 norm limited to n <= " +
                    std::to_string(kMaxExactInfToOneSize) + " (got " + std::to_string(rows) +
                    "); use inf_to_one_norm_lower");
  }
  if (rows == 0 || m.cols() == 0) return 0.0;

  // u_0 = +1 w.l.o.g. (u and -u give the same value); Gray code over the rest.
  Eigen::VectorXd u = Eigen::VectorXd::Ones(rows);
  Eigen::RowVectorXd w = m.colwise().sum();
  double best = w.cwiseAbs().sum();
  const std::uint64_t count = std::uint64_t{1} << (rows - 1);
  for (std::uint64_t i = 1; i < count; ++i) {
    const auto bit = static_cast<Eigen::Index>(std::countr_zero(i)) + 1;
    w -= (2.0 * u(bit)) * m.row(bit);
    u(bit) = -u(bit);
    best = std::max(best, w.cwiseAbs().sum());
  }
  return best;
}

double inf_to_one_norm_lower(const Eigen::MatrixXd& m, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw ValidationError("inf_to_one_norm_lower: restarts must be >= 1");
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  if (rows == 0 || cols == 0) return 0.0;

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  double best = 0.0;
  Eigen::VectorXd u(rows);
  Eigen::VectorXd v(cols);
  for (int r = 0; r < restarts; ++r) {
    for (Eigen::Index i = 0; i < rows; ++i) u(i) = coin(rng) ? 1.0 : -1.0;
    double value = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 10000; ++iter) {
      v = (m.transpose() * u).unaryExpr(&sign_of);
      const Eigen::VectorXd mv = m * v;
      const double next = mv.cwiseAbs().sum();
      u = mv.unaryExpr(&sign_of);
      if (next <= value + 1e-12 * (1.0 + std::abs(next))) {
        value = std::max(value, next);
        break;
      }
      value = next;
    }
    best = std::max(best, value);
  }
  return best;
}

double l1_norm(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().sum();
}

double lp_power_sum(const Eigen::MatrixXd& m, double p) {
  if (!(p > 0.0)) throw DomainError("l^p quasi-norm requires p > 0");
  double s = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double a = std::abs(m(i, j));
      if (a > 0.0) s += std::pow(a, p);
    }
  }
  return s;
}

double lp_quasinorm(const Eigen::MatrixXd& m, double p) {
  const double s = lp_power_sum(m, p);
  return s == 0.0 ? 0.0 : std::pow(s, 1.0 / p);
}

}  // namespace sdpembed::linalg
