#include "sdpembed/affinity.hpp"

#include "sdpembed/errors.hpp"

#include <cmath>

namespace sdpembed::affinity {

namespace {

void check_params(const AffinityFn& f) {
  if (!(f.h0 > 0.0) || !std::isfinite(f.h0)) throw DomainError("bandwidth h0 must be positive");
  if (f.kind != Kind::gaussian && !(f.a > 0.0)) throw DomainError("shape a must be positive");
}

}  // namespace

AffinityFn AffinityFn::gaussian(double h0) {
  AffinityFn f{Kind::gaussian, h0, 2.0};
  check_params(f);
  return f;
}

AffinityFn AffinityFn::power_exponential(double h0, double a) {
  AffinityFn f{Kind::power_exponential, h0, a};
  check_params(f);
  return f;
}

AffinityFn AffinityFn::rational(double h0, double a) {
  AffinityFn f{Kind::rational, h0, a};
  check_params(f);
  return f;
}

AffinityFn AffinityFn::logistic(double h0, double a) {
  AffinityFn f{Kind::logistic, h0, a};
  check_params(f);
  return f;
}

Kind parse_kind(const std::string& name) {
  if (name == "gaussian") return Kind::gaussian;
  if (name == "powerexp" || name == "power_exponential") return Kind::power_exponential;
  if (name == "rational") return Kind::rational;
  if (name == "logistic") return Kind::logistic;
  throw ValidationError("unknown affinity kind '" + name +
                        "' (expected gaussian, powerexp, rational or logistic)");
}

std::string kind_name(Kind kind) {
  switch (kind) {
    case Kind::gaussian: return "gaussian";
    case Kind::power_exponential: return "powerexp";
    case Kind::rational: return "rational";
    case Kind::logistic: return "logistic";
  }
  return "unknown";
}

double evaluate(const AffinityFn& f, double h) {
  if (h < 0.0) throw DomainError("affinity evaluated at negative distance");
  const double u = h / f.h0;
  switch (f.kind) {
    case Kind::gaussian: return std::exp(-u * u);
    case Kind::power_exponential: return std::exp(-std::pow(u, f.a));
    case Kind::rational: return std::pow(1.0 + u, -f.a);
    case Kind::logistic:
      // (1 + e^u)^(-a) = exp(-a * log1p(e^u)); softplus written to avoid overflow
      return std::exp(-f.a * (u + std::log1p(std::exp(-u))));
  }
  return 0.0;
}

double lipschitz_constant(const AffinityFn& f) {
  check_params(f);
  switch (f.kind) {
    case Kind::gaussian:
      // |f'| = (2u/h0) e^{-u^2}, maximal at u = 1/sqrt(2)
      return std::sqrt(2.0 / std::exp(1.0)) / f.h0;
    case Kind::power_exponential: {
      if (f.a < 1.0) {
        throw DomainError("power-exponential affinity with a < 1 is not Lipschitz at 0");
      }
      // |f'| = (a/h0) u^{a-1} e^{-u^a}, maximal where u^a = (a-1)/a
      const double s = (f.a - 1.0) / f.a;
      return f.a / f.h0 * std::pow(s, s) * std::exp(-s);
    }
    case Kind::rational:
    case Kind::logistic: return f.a / f.h0;
  }
  return 0.0;
}

double default_h0(const Eigen::MatrixXd& points) {
  if (points.size() == 0) throw ValidationError("bandwidth heuristic needs data");
  const double max_col = points.colwise().squaredNorm().maxCoeff();
  if (!(max_col > 0.0)) throw ValidationError("bandwidth heuristic gives 0 on all-zero data");
  return 0.5 * std::sqrt(max_col);
}

AffinityMatrix build_matrix(const Eigen::MatrixXd& points, const AffinityFn& f) {
  check_params(f);
  const Eigen::Index n = points.rows();
  AffinityMatrix out{Eigen::MatrixXd(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = evaluate(f, (points.row(i) - points.row(j)).norm());
      out.entries(i, j) = v;
      out.entries(j, i) = v;
    }
  }
  return out;
}

AffinityMatrix expected_matrix(const gmm::GaussianMixtureSpec& spec, double h0) {
  const int kk = spec.num_clusters();
  Eigen::MatrixXd block(kk, kk);
  for (int k = 0; k < kk; ++k) {
    for (int k2 = k; k2 < kk; ++k2) {
      block(k, k2) = gmm::expected_affinity(spec, k, k2, h0);
      block(k2, k) = block(k, k2);
    }
  }
  const auto labels = spec.labels();
  const auto n = static_cast<Eigen::Index>(labels.size());
  AffinityMatrix out{Eigen::MatrixXd(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out.entries(i, j) = i == j ? 1.0 : block(labels[i] - 1, labels[j] - 1);
    }
  }
  return out;
}

}  // namespace sdpembed::affinity
