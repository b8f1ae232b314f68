#include "sdpembed/sdp_solver.hpp"

#include "sdpembed/errors.hpp"
#include "sdpembed/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace sdpembed::sdp {

namespace {

constexpr double kWolfeDecrease = 1e-4;
constexpr double kWolfeCurvature = 0.5;
constexpr int kLineSearchEvals = 40;
// Subgradients enter the stationarity certificate only if taken within this
// (relative) distance of the current iterate.
constexpr double kCertificateRadius = 1e-4;
// Eigenvalues within this relative window of lambda_max are candidates for
// the recovered eigenspace.
constexpr double kRecoveryWindow = 1e-2;
constexpr Eigen::Index kRecoveryMaxRank = 48;

struct Evaluation {
  double value = 0.0;
  Eigen::VectorXd grad;
};

Evaluation evaluate(const SdpProblem& problem, const Eigen::VectorXd& z) {
  const Eigen::Index n = problem.size();
  const linalg::SymMatrix op(dual_operator(problem, DualPoint{z}));
  const linalg::Eigenspace top = linalg::lambda_max_eigenspace(op, problem.options.eigenspace_tol);
  const auto r = static_cast<double>(top.multiplicity());
  const double nd = static_cast<double>(n);

  Evaluation e;
  e.value = nd * top.value - z.head(n).sum() - problem.lambda * z(n);
  e.grad.resize(n + 1);
  e.grad.head(n) = (nd / r) * top.basis.rowwise().squaredNorm() - Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd s = top.basis.transpose() * Eigen::VectorXd::Ones(n);
  e.grad(n) = (nd / r) * s.squaredNorm() - problem.lambda;
  return e;
}

// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& x) {
  std::vector<double> u(x.data(), x.data() + x.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return (x.array() - theta).cwiseMax(0.0).matrix();
}

// min ||G w|| over the simplex, by accelerated projected gradient on w^t Q w.
double min_norm_convex_combination(const std::deque<Eigen::VectorXd>& grads) {
  const auto m = static_cast<Eigen::Index>(grads.size());
  if (m == 0) return std::numeric_limits<double>::infinity();
  if (m == 1) return grads.front().norm();
  Eigen::MatrixXd q(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      q(i, j) = grads[static_cast<std::size_t>(i)].dot(grads[static_cast<std::size_t>(j)]);
      q(j, i) = q(i, j);
    }
  }
  // Normalize so the step size is well scaled.
  const double scale = q.diagonal().maxCoeff();
  if (!(scale > 0.0)) return 0.0;
  q /= scale;
  const double lip = 2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q, Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .maxCoeff();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  Eigen::VectorXd y = w;
  double tk = 1.0;
  double best = w.dot(q * w);
  for (int it = 0; it < 500; ++it) {
    const Eigen::VectorXd next = project_simplex(y - (2.0 / lip) * (q * y));
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    y = next + ((tk - 1.0) / tn) * (next - w);
    w = next;
    tk = tn;
    best = std::min(best, w.dot(q * w));
  }
  return std::sqrt(std::max(best, 0.0) * scale);
}

// Two-loop recursion: returns -H g.
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& g, const std::deque<Eigen::VectorXd>& ss,
                                const std::deque<Eigen::VectorXd>& ys) {
  Eigen::VectorXd q = g;
  const std::size_t m = ss.size();
  std::vector<double> alpha(m);
  std::vector<double> rho(m);
  for (std::size_t k = m; k-- > 0;) {
    rho[k] = 1.0 / ys[k].dot(ss[k]);
    alpha[k] = rho[k] * ss[k].dot(q);
    q -= alpha[k] * ys[k];
  }
  double gamma = 1.0;
  if (m > 0) {
    gamma = ss.back().dot(ys.back()) / ys.back().squaredNorm();
  } else {
    const double gn = g.norm();
    gamma = gn > 0.0 ? 1.0 / gn : 1.0;
  }
  Eigen::VectorXd r = gamma * q;
  for (std::size_t k = 0; k < m; ++k) {
    const double beta = rho[k] * ys[k].dot(r);
    r += (alpha[k] - beta) * ss[k];
  }
  return -r;
}

struct LineSearchResult {
  bool wolfe = false;     // both conditions met
  bool decrease = false;  // at least sufficient decrease
  double t = 0.0;
  Evaluation at;
};

template <typename Fn>
LineSearchResult weak_wolfe(const Fn& eval, const Eigen::VectorXd& z, const Evaluation& cur,
                            const Eigen::VectorXd& d, int& evals) {
  const double slope = cur.grad.dot(d);
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double t = 1.0;
  LineSearchResult out;
  for (int k = 0; k < kLineSearchEvals; ++k) {
    Evaluation e = eval(z + t * d);
    ++evals;
    if (!std::isfinite(e.value) || e.value > cur.value + kWolfeDecrease * t * slope) {
      hi = t;
    } else {
      if (!out.decrease || e.value < out.at.value) {
        out.decrease = true;
        out.t = t;
        out.at = e;
      }
      if (e.grad.dot(d) < kWolfeCurvature * slope) {
        lo = t;
      } else {
        out.wolfe = true;
        out.t = t;
        out.at = std::move(e);
        return out;
      }
    }
    t = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * lo;
    if (std::isfinite(hi) && hi - lo <= 1e-15 * hi) break;
  }
  return out;
}

struct RunState {
  Eigen::VectorXd best_z;
  double best_value = std::numeric_limits<double>::infinity();
  double stationarity = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

// Quasi-Newton on x with z = D x, D = diag(1, ..., 1, 1/n): the sum multiplier
// acts through 1 1^t, whose spectral norm is n, so this puts all constraint
// operators on the same spectral scale.
void run_quasi_newton(const SdpProblem& problem, const Eigen::VectorXd& z0, int budget,
                      RunState& st) {
  const auto& opt = problem.options;
  const Eigen::Index n = problem.size();
  const auto memory = static_cast<std::size_t>(opt.bfgs_memory);
  Eigen::VectorXd dscale = Eigen::VectorXd::Ones(n + 1);
  dscale(n) = 1.0 / static_cast<double>(n);
  auto eval = [&](const Eigen::VectorXd& x) {
    Evaluation e = evaluate(problem, x.cwiseProduct(dscale));
    e.grad = e.grad.cwiseProduct(dscale);
    return e;
  };

  Eigen::VectorXd x = z0.cwiseQuotient(dscale);
  Evaluation cur = eval(x);
  ++st.evaluations;
  if (cur.value < st.best_value) {
    st.best_value = cur.value;
    st.best_z = z0;
  }

  std::deque<Eigen::VectorXd> ss;
  std::deque<Eigen::VectorXd> ys;
  std::deque<Eigen::VectorXd> recent_x{z0};
  std::deque<Eigen::VectorXd> recent{cur.grad.cwiseQuotient(dscale)};
  double last_step = 1.0;
  int fallback_count = 0;

  for (int it = 0; it < budget; ++it) {
    ++st.iterations;
    Eigen::VectorXd d = lbfgs_direction(cur.grad, ss, ys);
    if (!(cur.grad.dot(d) < 0.0)) {
      ss.clear();
      ys.clear();
      d = -cur.grad / std::max(cur.grad.norm(), 1e-300);
    }
    LineSearchResult ls = weak_wolfe(eval, x, cur, d, st.evaluations);
    if (ls.decrease) {
      const Eigen::VectorXd step = ls.t * d;
      const Eigen::VectorXd dy = ls.at.grad - cur.grad;
      if (ls.wolfe && step.dot(dy) > 1e-14 * step.norm() * dy.norm()) {
        ss.push_back(step);
        ys.push_back(dy);
        if (ss.size() > memory) {
          ss.pop_front();
          ys.pop_front();
        }
      } else if (!ls.wolfe) {
        ss.clear();
        ys.clear();
      }
      last_step = step.norm();
      x += step;
      cur = std::move(ls.at);
    } else {
      // Nonsmooth stall: plain normalized subgradient step, length c / sqrt(k).
      ++fallback_count;
      ss.clear();
      ys.clear();
      const double gn = cur.grad.norm();
      if (!(gn > 0.0)) {
        st.stationarity = 0.0;
        st.converged = true;
        break;
      }
      x -= (std::max(last_step, 1e-8) / std::sqrt(static_cast<double>(fallback_count))) *
           cur.grad / gn;
      cur = eval(x);
      ++st.evaluations;
    }
    if (cur.value < st.best_value) {
      st.best_value = cur.value;
      st.best_z = x.cwiseProduct(dscale);
    }

    const Eigen::VectorXd zcur = x.cwiseProduct(dscale);
    recent_x.push_back(zcur);
    recent.push_back(cur.grad.cwiseQuotient(dscale));
    if (recent.size() > memory) {
      recent_x.pop_front();
      recent.pop_front();
    }
    const double radius = kCertificateRadius * (1.0 + zcur.lpNorm<Eigen::Infinity>());
    std::deque<Eigen::VectorXd> nearby;
    for (std::size_t i = 0; i < recent.size(); ++i) {
      if ((recent_x[i] - zcur).lpNorm<Eigen::Infinity>() <= radius) nearby.push_back(recent[i]);
    }
    const double cert = min_norm_convex_combination(nearby);
    st.stationarity = std::min(st.stationarity, cert);
    if (cert <= opt.grad_tol) {
      st.converged = true;
      break;
    }
  }
}

// Spectral-simplex projection of a symmetric matrix: {W psd, trace W = 1}.
Eigen::MatrixXd project_spectral_simplex(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (w + w.transpose()));
  const Eigen::VectorXd lam = project_simplex(es.eigenvalues());
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

struct WeightFit {
  Eigen::MatrixXd w;
  double objective = 0.0;
};

double fit_objective(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w, double lambda) {
  const auto nd = static_cast<double>(v.rows());
  const Eigen::MatrixXd vw = v * w;
  const Eigen::VectorXd diag = nd * (vw.cwiseProduct(v)).rowwise().sum();
  const Eigen::VectorXd s = v.transpose() * Eigen::VectorXd::Ones(v.rows());
  const double sum = nd * s.dot(w * s);
  return (diag.array() - 1.0).square().sum() + (sum - lambda) * (sum - lambda);
}

// min ||diag(n V W V^t) - 1||^2 + (<n V W V^t, 1 1^t> - lambda)^2 over the PSD
// simplex. The trace-constrained least-squares solution is computed directly;
// when it is not PSD, accelerated projected gradient refines it.
WeightFit fit_weights(const Eigen::MatrixXd& v, double lambda, int refine_iters) {
  const Eigen::Index n = v.rows();
  const Eigen::Index r = v.cols();
  const auto nd = static_cast<double>(n);
  if (r == 1) {
    WeightFit f{Eigen::MatrixXd::Ones(1, 1), 0.0};
    f.objective = fit_objective(v, f.w, lambda);
    return f;
  }

  // Orthonormal basis of symmetric r x r matrices: E_aa, (E_ab + E_ba)/sqrt(2).
  const Eigen::Index p = r * (r + 1) / 2;
  const Eigen::VectorXd s = v.transpose() * Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd jac(n + 1, p);
  Eigen::VectorXd trace_row = Eigen::VectorXd::Zero(p);
  Eigen::Index col = 0;
  const double root2 = std::sqrt(2.0);
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = a; b < r; ++b, ++col) {
      if (a == b) {
        jac.col(col).head(n) = nd * v.col(a).cwiseAbs2();
        jac(n, col) = nd * s(a) * s(a);
        trace_row(col) = 1.0;
      } else {
        jac.col(col).head(n) = nd * root2 * v.col(a).cwiseProduct(v.col(b));
        jac(n, col) = nd * root2 * s(a) * s(b);
      }
    }
  }
  Eigen::VectorXd target = Eigen::VectorXd::Ones(n + 1);
  target(n) = lambda;

  auto unpack = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXd w(r, r);
    Eigen::Index c = 0;
    for (Eigen::Index a = 0; a < r; ++a) {
      for (Eigen::Index b = a; b < r; ++b, ++c) {
        if (a == b) {
          w(a, a) = x(c);
        } else {
          w(a, b) = x(c) / root2;
          w(b, a) = w(a, b);
        }
      }
    }
    return w;
  };
  auto pack = [&](const Eigen::MatrixXd& w) {
    Eigen::VectorXd x(p);
    Eigen::Index c = 0;
    for (Eigen::Index a = 0; a < r; ++a) {
      for (Eigen::Index b = a; b < r; ++b, ++c) x(c) = a == b ? w(a, a) : root2 * w(a, b);
    }
    return x;
  };

  // KKT system of the trace-constrained least squares.
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(p + 1, p + 1);
  kkt.topLeftCorner(p, p) = 2.0 * jac.transpose() * jac;
  kkt.block(0, p, p, 1) = trace_row;
  kkt.block(p, 0, 1, p) = trace_row.transpose();
  Eigen::VectorXd rhs(p + 1);
  rhs.head(p) = 2.0 * jac.transpose() * target;
  rhs(p) = 1.0;
  const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);

  Eigen::MatrixXd w = project_spectral_simplex(unpack(sol.head(p)));
  double best_obj = fit_objective(v, w, lambda);
  Eigen::MatrixXd best_w = w;

  const double top_sv = Eigen::JacobiSVD<Eigen::MatrixXd>(jac).singularValues()(0);
  const double lip = 2.0 * top_sv * top_sv;
  if (lip > 0.0) {
    Eigen::VectorXd x = pack(w);
    Eigen::VectorXd y = x;
    double tk = 1.0;
    for (int it = 0; it < refine_iters; ++it) {
      const Eigen::VectorXd grad = 2.0 * jac.transpose() * (jac * y - target);
      const Eigen::VectorXd next = pack(project_spectral_simplex(unpack(y - grad / lip)));
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      y = next + ((tk - 1.0) / tn) * (next - x);
      x = next;
      tk = tn;
      const Eigen::MatrixXd wx = unpack(x);
      const double obj = fit_objective(v, wx, lambda);
      if (obj < best_obj) {
        best_obj = obj;
        best_w = wx;
      }
    }
  }
  return WeightFit{best_w, best_obj};
}

// Projection of the strict upper triangle of v onto {0 <= x <= 1, sum x = target}:
// x = clip(v - tau, 0, 1) where h(tau) = sum clip(v - tau, 0, 1) hits the target.
// h is piecewise linear and nonincreasing, so safeguarded Newton on tau ends
// exactly on the right piece after a few passes. Diagonal set to one, lower
// triangle mirrored.
Eigen::MatrixXd project_feasible(const Eigen::MatrixXd& v, double lambda) {
  const Eigen::Index n = v.rows();
  const double target = 0.5 * (lambda - static_cast<double>(n));
  const auto count = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  std::vector<double> up;
  up.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) up.push_back(0.5 * (v(i, j) + v(j, i)));
  }

  double tau = 0.0;
  if (up.empty() || target <= 0.0) {
    tau = std::numeric_limits<double>::infinity();
  } else if (target >= count) {
    tau = -std::numeric_limits<double>::infinity();
  } else {
    const auto [mn, mx] = std::minmax_element(up.begin(), up.end());
    double lo = *mn - 1.0;  // h(lo) = count > target
    double hi = *mx;        // h(hi) = 0 < target
    tau = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      double h = 0.0;
      double free_count = 0.0;
      for (double x : up) {
        const double y = x - tau;
        if (y >= 1.0) {
          h += 1.0;
        } else if (y > 0.0) {
          h += y;
          free_count += 1.0;
        }
      }
      const double err = h - target;
      if (std::abs(err) <= 1e-13 * (1.0 + target)) break;
      (err > 0.0 ? lo : hi) = tau;
      const double newton = free_count > 0.0 ? tau + err / free_count : lo - 1.0;
      tau = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
      if (hi - lo <= 1e-15 * (1.0 + std::abs(tau))) break;
    }
  }

  Eigen::MatrixXd x(n, n);
  std::size_t k = 0;
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double y = std::clamp(up[k++] - tau, 0.0, 1.0);
      x(i, j) = y;
      x(j, i) = y;
    }
  }
  x.diagonal().setOnes();
  return x;
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "splitting" || name == "admm") return Method::splitting;
  if (name == "spectral-dual" || name == "spectral_dual") return Method::spectral_dual;
  throw ValidationError("unknown solver method '" + name + "' (expected splitting or spectral-dual)");
}

std::string method_name(Method m) {
  return m == Method::splitting ? "splitting" : "spectral-dual";
}

void SolverOptions::validate() const {
  if (!(grad_tol > 0.0)) throw ValidationError("grad_tol must be positive");
  if (max_iter < 1) throw ValidationError("max_iter must be positive");
  if (bfgs_memory < 1) throw ValidationError("bfgs_memory must be positive");
  if (restarts < 0) throw ValidationError("restarts must be nonnegative");
  if (!(eigenspace_tol > 0.0)) throw ValidationError("eigenspace_tol must be positive");
  if (recovery_refine_iters < 0) throw ValidationError("recovery_refine_iters must be nonnegative");
  if (!(admm_tol > 0.0)) throw ValidationError("admm_tol must be positive");
  if (admm_max_iter < 1) throw ValidationError("admm_max_iter must be positive");
  if (!(admm_rho > 0.0)) throw ValidationError("admm_rho must be positive");
  if (!(admm_gap_tol > 0.0)) throw ValidationError("admm_gap_tol must be positive");
  if (!(admm_feas_tol > 0.0)) throw ValidationError("admm_feas_tol must be positive");
}

void SdpProblem::validate() const {
  const auto& a = affinity.entries;
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw ValidationError("affinity matrix must be square and nonempty");
  }
  if (!a.allFinite()) throw ValidationError("affinity matrix has non-finite entries");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > linalg::SymMatrix::kAsymmetryTolerance) {
    throw ValidationError("affinity matrix is not symmetric");
  }
  const auto n = static_cast<double>(a.rows());
  if (!(lambda >= n && lambda <= n * n)) {
    throw ValidationError("lambda must lie in [n, n^2] = [" + std::to_string(n) + ", " +
                          std::to_string(n * n) + "], got " + std::to_string(lambda));
  }
  options.validate();
}

Eigen::MatrixXd dual_operator(const SdpProblem& problem, const DualPoint& zp) {
  const Eigen::Index n = problem.size();
  if (zp.z.size() != n + 1) throw ValidationError("dual point must have n + 1 entries");
  Eigen::MatrixXd m = problem.affinity.entries;
  m.array() += zp.z(n);
  m.diagonal() += zp.z.head(n);
  return m;
}

double dual_value(const SdpProblem& problem, const DualPoint& zp) {
  return evaluate(problem, zp.z).value;
}

Eigen::VectorXd dual_subgradient(const SdpProblem& problem, const DualPoint& zp) {
  return evaluate(problem, zp.z).grad;
}

DualRun minimize_dual(const SdpProblem& problem) {
  problem.validate();
  const Eigen::Index n = problem.size();
  const auto& opt = problem.options;

  RunState st;
  st.best_z = Eigen::VectorXd::Zero(n + 1);
  run_quasi_newton(problem, Eigen::VectorXd::Zero(n + 1), opt.max_iter, st);

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < opt.restarts && !st.converged; ++r) {
    const double scale = 1e-3 * (1.0 + st.best_z.cwiseAbs().maxCoeff());
    Eigen::VectorXd start = st.best_z;
    for (Eigen::Index i = 0; i <= n; ++i) start(i) += scale * normal(rng);
    run_quasi_newton(problem, start, opt.max_iter, st);
  }

  DualRun out;
  out.point = DualPoint{st.best_z};
  out.value = st.best_value;
  out.stationarity = st.stationarity;
  out.iterations = st.iterations;
  out.evaluations = st.evaluations;
  out.converged = st.converged;
  return out;
}

Residuals compute_residuals(const Eigen::MatrixXd& z, double lambda) {
  Residuals r;
  const Eigen::MatrixXd sym = 0.5 * (z + z.transpose());
  r.min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
  r.min_entry = z.minCoeff();
  r.max_entry = z.maxCoeff();
  r.max_diag_deviation = (z.diagonal().array() - 1.0).abs().maxCoeff();
  r.sum_deviation = std::abs(z.sum() - lambda);
  return r;
}

SdpSolution recover_primal(const SdpProblem& problem, const DualPoint& zstar) {
  problem.validate();
  if (!zstar.z.allFinite()) throw ValidationError("dual point has non-finite entries");
  const Eigen::Index n = problem.size();
  const auto nd = static_cast<double>(n);
  const auto& opt = problem.options;

  const linalg::SymMatrix op(dual_operator(problem, zstar));
  const Eigen::Index k = std::min(n, kRecoveryMaxRank);
  const linalg::EigenDecomposition top = linalg::top_eigenpairs(op, k);
  const double lmax = top.values(0);
  const double tight = opt.eigenspace_tol * (1.0 + std::abs(lmax));
  const double window = std::max(tight, kRecoveryWindow * (1.0 + std::abs(lmax)));

  Eigen::Index r_min = 1;
  while (r_min < k && lmax - top.values(r_min) <= tight) ++r_min;
  Eigen::Index r_max = r_min;
  while (r_max < k && lmax - top.values(r_max) <= window) ++r_max;

  // Smallest rank whose constraint fit is within 1% of the best candidate.
  std::vector<WeightFit> fits;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = r_min; r <= r_max; ++r) {
    fits.push_back(fit_weights(top.vectors.leftCols(r), problem.lambda, opt.recovery_refine_iters));
    best = std::min(best, fits.back().objective);
  }
  Eigen::Index chosen = r_max;
  for (Eigen::Index r = r_min; r <= r_max; ++r) {
    const double obj = fits[static_cast<std::size_t>(r - r_min)].objective;
    if (obj <= best * 1.01 + 1e-12 * nd) {
      chosen = r;
      break;
    }
  }
  const Eigen::MatrixXd v = top.vectors.leftCols(chosen);
  const Eigen::MatrixXd& w = fits[static_cast<std::size_t>(chosen - r_min)].w;

  SdpSolution sol;
  const Eigen::MatrixXd raw = nd * v * w * v.transpose();
  sol.raw_residuals = compute_residuals(raw, problem.lambda);
  sol.eigenspace_rank = chosen;

  Eigen::MatrixXd zh = 0.5 * (raw + raw.transpose());
  zh = zh.cwiseMax(0.0).cwiseMin(1.0);
  zh.diagonal().setOnes();
  sol.z_hat = std::move(zh);
  sol.residuals = compute_residuals(sol.z_hat, problem.lambda);
  sol.dual_value = dual_value(problem, zstar);
  sol.primal_value = problem.affinity.entries.cwiseProduct(sol.z_hat).sum();
  sol.duality_gap = sol.dual_value - sol.primal_value;
  return sol;
}

double dual_bound(const SdpProblem& problem, const Eigen::MatrixXd& multiplier) {
  problem.validate();
  const Eigen::Index n = problem.size();
  if (multiplier.rows() != n || multiplier.cols() != n) {
    throw ValidationError("multiplier must be n x n");
  }
  const Eigen::MatrixXd g = 0.5 * (multiplier + multiplier.transpose());
  const double lmax = linalg::lambda_max(linalg::SymMatrix(problem.affinity.entries - g));

  std::vector<double> off;
  off.reserve(static_cast<std::size_t>(n * (n - 1)));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) off.push_back(g(i, j));
    }
  }
  const auto nd = static_cast<double>(n);
  double nu = 0.0;
  if (!off.empty()) {
    // Piecewise-linear in nu with slope (lambda - n) - #{G_ij > nu}: the minimizer
    // is the ceil(lambda - n)-th largest off-diagonal entry.
    std::sort(off.begin(), off.end(), std::greater<>());
    const auto rank = static_cast<std::size_t>(
        std::clamp(std::ceil(problem.lambda - nd - 1e-9), 1.0, static_cast<double>(off.size())));
    nu = off[rank - 1];
  }
  double excess = 0.0;
  for (double x : off) excess += std::max(x - nu, 0.0);
  return nd * lmax + (g.diagonal().array() - nu).sum() + problem.lambda * nu + excess;
}

constexpr int kGapCheckPeriod = 20;

SdpSolution solve_splitting(const SdpProblem& problem) {
  problem.validate();
  const Eigen::Index n = problem.size();
  const auto nd = static_cast<double>(n);
  const auto& opt = problem.options;
  const Eigen::MatrixXd& a = problem.affinity.entries;

  double rho = opt.admm_rho;
  Eigen::MatrixXd x = project_feasible(Eigen::MatrixXd::Identity(n, n), problem.lambda);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd z;
  Eigen::Index rank = 0;
  const double tol = opt.admm_tol * nd;

  SdpSolution sol;
  for (int it = 1; it <= opt.admm_max_iter; ++it) {
    Eigen::MatrixXd arg = x - u + a / rho;
    arg = 0.5 * (arg + arg.transpose());
    const linalg::EigenDecomposition pos =
        linalg::eigenpairs_above(linalg::SymMatrix(arg), 0.0, rank);
    rank = pos.values.size();
    z = pos.vectors * pos.values.asDiagonal() * pos.vectors.transpose();
    const Eigen::MatrixXd x_prev = x;
    x = project_feasible(z + u, problem.lambda);
    u += z - x;
    u = 0.5 * (u + u.transpose());

    const double primal_res = (z - x).norm();
    const double dual_res = rho * (x - x_prev).norm();
    sol.iterations = it;
    sol.stationarity = std::max(primal_res, dual_res) / nd;
    if (primal_res <= tol && dual_res <= tol) {
      sol.converged = true;
      break;
    }
    // Early exit once the certified gap is small and Z, X nearly agree.
    if (it % kGapCheckPeriod == 0 && primal_res <= opt.admm_feas_tol * nd) {
      const double primal = a.cwiseProduct(x).sum();
      const double bound = dual_bound(problem, rho * u);
      if (bound - primal <= opt.admm_gap_tol * std::max(1.0, std::abs(primal))) {
        sol.converged = true;
        break;
      }
    }
    // Residual balancing; u is the scaled multiplier so it rescales with rho.
    if (it % 10 == 0) {
      if (primal_res > 10.0 * dual_res) {
        rho *= 2.0;
        u /= 2.0;
      } else if (dual_res > 10.0 * primal_res) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }

  sol.raw_residuals = compute_residuals(z, problem.lambda);
  const linalg::EigenDecomposition pos =
      linalg::eigenpairs_above(linalg::SymMatrix(0.5 * (z + z.transpose())), 1e-8 * nd);
  sol.eigenspace_rank = pos.values.size();
  sol.z_hat = std::move(x);
  sol.residuals = compute_residuals(sol.z_hat, problem.lambda);
  sol.primal_value = a.cwiseProduct(sol.z_hat).sum();
  sol.dual_value = dual_bound(problem, rho * u);
  sol.duality_gap = sol.dual_value - sol.primal_value;
  return sol;
}

SdpSolution solve(const SdpProblem& problem) {
  problem.validate();
  if (problem.options.method == Method::splitting) return solve_splitting(problem);
  const DualRun run = minimize_dual(problem);
  SdpSolution sol = recover_primal(problem, run.point);
  sol.iterations = run.iterations;
  sol.converged = run.converged;
  sol.stationarity = run.stationarity;
  return sol;
}

}  // namespace sdpembed::sdp
