#include "sdpembed/affinity.hpp"
#include "sdpembed/cluster.hpp"
#include "sdpembed/embed.hpp"
#include "sdpembed/errors.hpp"
#include "sdpembed/gmm_model.hpp"
#include "sdpembed/harness.hpp"
#include "sdpembed/io.hpp"
#include "sdpembed/linalg.hpp"
#include "sdpembed/sdp_solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sdpembed;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNotConverged = 2;

// A --config document is a flat JSON object keyed by long flag names. Its
// entries are appended as ordinary flags, skipping any flag already given on
// the command line, so unknown keys and bad values fail like bad flags do.
std::string config_scalar(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw ValidationError("config key '" + key + "' must hold a string, number, boolean or array");
}

std::vector<std::string> expand_config(std::vector<std::string> args) {
  auto it = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return a == "--config" || a.rfind("--config=", 0) == 0;
  });
  if (it == args.end()) return args;
  std::string path;
  if (*it == "--config") {
    if (std::next(it) == args.end()) throw ValidationError("--config needs a file");
    path = *std::next(it);
    it = args.erase(it, std::next(it, 2));
  } else {
    path = it->substr(std::string("--config=").size());
    it = args.erase(it);
  }
  if (std::find(args.begin(), args.end(), "--config") != args.end()) {
    throw ValidationError("--config given more than once");
  }

  json doc;
  try {
    doc = json::parse(io::read_text(path));
  } catch (const json::exception& e) {
    throw ValidationError("config " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config " + path + " must be a JSON object");

  auto given = [&args](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&flag](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  for (const auto& [key, value] : doc.items()) {
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    if (value.is_array()) {
      for (const auto& v : value) args.push_back(config_scalar(v, key));
    } else {
      args.push_back(config_scalar(value, key));
    }
  }
  return args;
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ValidationError(what + " is required");
  if (!fs::is_regular_file(path)) throw ValidationError(what + " not found: " + path);
}

void require_output_prefix(const std::string& prefix) {
  if (prefix.empty()) throw ValidationError("--out is required");
  const fs::path parent = fs::path(prefix).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ValidationError("output directory does not exist: " + parent.string());
  }
}

json residuals_json(const sdp::Residuals& r) {
  return json{{"min_eigenvalue", r.min_eigenvalue},
              {"min_entry", r.min_entry},
              {"max_entry", r.max_entry},
              {"max_diag_deviation", r.max_diag_deviation},
              {"sum_deviation", r.sum_deviation}};
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string spec;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<double> h0;
};

int cmd_generate(const GenerateArgs& a) {
  require_file(a.spec, "--spec");
  require_output_prefix(a.out);
  const gmm::GaussianMixtureSpec spec = io::read_spec(a.spec);
  const gmm::LabeledDataSet data = gmm::sample(spec, a.seed);
  io::write_dataset(a.out, data);

  const double h0 = a.h0 ? *a.h0 : affinity::default_h0(data.points);
  const auto f = affinity::AffinityFn::gaussian(h0);
  const gmm::SeparationReport r = gmm::separation_report(spec, h0, affinity::lipschitz_constant(f));
  std::cout << "n " << spec.total_size() << "\n"
            << "d " << spec.dim() << "\n"
            << "K " << spec.num_clusters() << "\n"
            << "lambda0 " << io::format_double(spec.lambda0()) << "\n"
            << "h0 " << io::format_double(h0) << "\n"
            << "p " << io::format_double(r.p) << "\n"
            << "q " << io::format_double(r.q) << "\n"
            << "sigma " << io::format_double(r.sigma) << "\n"
            << "ell " << io::format_double(r.ell) << "\n"
            << "t0 " << io::format_double(r.t0) << "\n"
            << "c " << io::format_double(r.c) << "\n"
            << "separated " << (r.separated ? "true" : "false") << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- solve

struct SolverArgs {
  std::string method = "splitting";
  int max_iter = sdp::SolverOptions{}.max_iter;
  double grad_tol = sdp::SolverOptions{}.grad_tol;
  int restarts = sdp::SolverOptions{}.restarts;
  double admm_tol = sdp::SolverOptions{}.admm_tol;
  int admm_max_iter = sdp::SolverOptions{}.admm_max_iter;
  double admm_gap_tol = sdp::SolverOptions{}.admm_gap_tol;

  sdp::SolverOptions options(std::uint64_t seed) const {
    sdp::SolverOptions o;
    o.method = sdp::parse_method(method);
    o.max_iter = max_iter;
    o.grad_tol = grad_tol;
    o.restarts = restarts;
    o.admm_tol = admm_tol;
    o.admm_max_iter = admm_max_iter;
    o.admm_gap_tol = admm_gap_tol;
    o.seed = seed;
    o.validate();
    return o;
  }

  void add_to(CLI::App* sub) {
    sub->add_option("--solver", method, "SDP method: splitting (all constraints) or spectral-dual")
        ->check(CLI::IsMember({"splitting", "spectral-dual"}))
        ->capture_default_str();
    sub->add_option("--max-iter", max_iter, "quasi-Newton iterations per run (spectral-dual)")
        ->capture_default_str();
    sub->add_option("--grad-tol", grad_tol, "stationarity tolerance (spectral-dual)")
        ->capture_default_str();
    sub->add_option("--restarts", restarts, "perturbed restarts (spectral-dual)")->capture_default_str();
    sub->add_option("--admm-tol", admm_tol, "residual tolerance (splitting)")->capture_default_str();
    sub->add_option("--admm-max-iter", admm_max_iter, "iteration cap (splitting)")
        ->capture_default_str();
    sub->add_option("--admm-gap-tol", admm_gap_tol, "relative certified gap for early stop (splitting)")
        ->capture_default_str();
  }
};

struct AffinityArgs {
  std::optional<double> h0;
  std::string kind = "gaussian";
  double a = 2.0;

  affinity::AffinityFn make(const Eigen::MatrixXd& points) const {
    const double h = h0 ? *h0 : affinity::default_h0(points);
    switch (affinity::parse_kind(kind)) {
      case affinity::Kind::gaussian: return affinity::AffinityFn::gaussian(h);
      case affinity::Kind::power_exponential: return affinity::AffinityFn::power_exponential(h, a);
      case affinity::Kind::rational: return affinity::AffinityFn::rational(h, a);
      case affinity::Kind::logistic: return affinity::AffinityFn::logistic(h, a);
    }
    throw ValidationError("unknown affinity kind");
  }

  void add_to(CLI::App* sub) {
    sub->add_option("--h0", h0, "affinity bandwidth (default: 0.5 sqrt(max column sum of squares))");
    sub->add_option("--affinity", kind, "affinity function")
        ->check(CLI::IsMember({"gaussian", "powerexp", "rational", "logistic"}))
        ->capture_default_str();
    sub->add_option("--a", a, "shape parameter for powerexp/rational/logistic")->capture_default_str();
  }
};

struct SolveArgs {
  std::string data;
  std::string matrix;
  std::string lambda = "lambda0";
  std::string criterion = "bic";
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  AffinityArgs affinity;
  SolverArgs solver;
};

int cmd_solve(const SolveArgs& a) {
  if (a.data.empty() == a.matrix.empty()) {
    throw ValidationError("exactly one of --data or --matrix is required");
  }
  if (!a.data.empty()) require_file(a.data, "--data");
  if (!a.matrix.empty()) require_file(a.matrix, "--matrix");
  require_output_prefix(a.out);
  const io::MatrixFormat format = io::parse_format(a.format);
  const sdp::SolverOptions options = a.solver.options(a.seed);

  json diag;
  gmm::LabeledDataSet data;
  affinity::AffinityMatrix am;
  if (!a.data.empty()) {
    data = io::read_dataset(a.data);
    const auto f = a.affinity.make(data.points);
    am = affinity::build_matrix(data.points, f);
    diag["affinity"] = json{{"kind", affinity::kind_name(f.kind)}, {"h0", f.h0}, {"a", f.a}};
  } else {
    am.entries = io::read_matrix(a.matrix);
    diag["affinity"] = json{{"matrix", a.matrix}};
  }
  const auto n = static_cast<double>(am.size());

  double lambda = 0.0;
  if (a.lambda == "auto") {
    if (a.data.empty()) throw ValidationError("--lambda auto needs --data (clusters are scored on points)");
    const auto criterion = a.criterion == "aic" ? harness::Criterion::aic : harness::Criterion::bic;
    const auto sel = harness::select_lambda(data.points, harness::lambda_grid(am.size()),
                                            a.affinity.make(data.points), options, criterion);
    lambda = sel.lambda;
    json table = json::array();
    for (const auto& c : sel.table) {
      table.push_back(json{{"lambda", c.lambda},
                           {"clusters", c.num_clusters},
                           {"log_likelihood", c.log_likelihood},
                           {"score", c.score},
                           {"converged", c.converged}});
    }
    diag["lambda_selection"] = json{{"criterion", a.criterion}, {"candidates", table}};
  } else if (a.lambda == "lambda0") {
    if (data.labels.empty()) {
      throw ValidationError("--lambda defaults to lambda0 from labels; pass a value or auto");
    }
    lambda = cluster::lambda0(cluster::Labeling{data.labels});
  } else {
    std::size_t used = 0;
    try {
      lambda = std::stod(a.lambda, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != a.lambda.size()) {
      throw ValidationError("--lambda must be a number, lambda0 or auto, got '" + a.lambda + "'");
    }
  }
  if (!(lambda >= n && lambda <= n * n)) {
    throw ValidationError("--lambda " + io::format_double(lambda) + " outside [n, n^2] = [" +
                          io::format_double(n) + ", " + io::format_double(n * n) + "]");
  }

  const sdp::SdpSolution sol = sdp::solve(sdp::SdpProblem{am, lambda, options});
  const std::string zpath = a.out + "_zhat." + (format == io::MatrixFormat::bin ? "bin" : "csv");
  io::write_matrix(zpath, sol.z_hat, format);

  diag["n"] = am.size();
  diag["lambda"] = lambda;
  diag["solver"] = sdp::method_name(options.method);
  diag["seed"] = a.seed;
  diag["dual_value"] = sol.dual_value;
  diag["primal_value"] = sol.primal_value;
  diag["duality_gap"] = sol.duality_gap;
  diag["residuals"] = residuals_json(sol.residuals);
  diag["raw_residuals"] = residuals_json(sol.raw_residuals);
  diag["eigenspace_rank"] = sol.eigenspace_rank;
  diag["iterations"] = sol.iterations;
  diag["stationarity"] = sol.stationarity;
  diag["converged"] = sol.converged;
  diag["zhat"] = zpath;
  if (!data.labels.empty()) {
    const auto zbar = cluster::cluster_matrix(cluster::Labeling{data.labels});
    diag["pi_n"] = cluster::edge_error_rate(sol.z_hat, zbar);
    diag["l1_normalized"] = cluster::l1_error_normalized(sol.z_hat, zbar);
  }
  io::write_text(a.out + "_diagnostics.json", diag.dump(2) + "\n");

  std::cout << "lambda " << io::format_double(lambda) << "\n"
            << "primal_value " << io::format_double(sol.primal_value) << "\n"
            << "dual_value " << io::format_double(sol.dual_value) << "\n"
            << "converged " << (sol.converged ? "true" : "false") << "\n";
  if (!sol.converged) {
    std::cerr << "warning: solver did not reach its tolerance; output is usable but approximate\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- embed-cluster

struct EmbedArgs {
  std::string zhat;
  std::string k = "auto";
  std::string method = "threshold";
  std::string points = "embedded";
  std::string data;
  std::string out;
};

int cmd_embed_cluster(const EmbedArgs& a) {
  require_file(a.zhat, "--zhat");
  if (a.points == "raw") require_file(a.data, "--data (needed for --points raw)");
  require_output_prefix(a.out);

  const Eigen::MatrixXd m = io::read_matrix(a.zhat);
  if (m.rows() != m.cols()) {
    throw ValidationError("estimate must be square, got " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()));
  }
  const linalg::SymMatrix z(m);
  int k_hat = 0;
  if (a.k == "auto") {
    k_hat = embed::estimate_k(linalg::eig_sym(z).values, embed::default_max_k(z.size()));
  } else {
    try {
      std::size_t used = 0;
      k_hat = std::stoi(a.k, &used);
      if (used != a.k.size()) throw std::invalid_argument(a.k);
    } catch (const std::exception&) {
      throw ValidationError("--k must be a positive integer or auto, got '" + a.k + "'");
    }
  }
  const embed::Embedding e = embed::embed_rows(z.entries(), k_hat);

  cluster::Labeling labels;
  if (a.method == "threshold") {
    labels = cluster::threshold_graph_clusters(z.entries());
  } else {
    Eigen::MatrixXd pts = e.coords;
    if (a.points == "raw") {
      pts = io::read_dataset(a.data).points;
      if (pts.rows() != z.size()) throw ValidationError("--data row count does not match the estimate");
    }
    labels = cluster::mst_clusters(pts, k_hat);
  }
  io::write_labels(a.out + "_labels.csv", labels.labels);
  io::write_embedding(a.out + "_embedding.csv", e.coords, labels.labels);
  std::cout << "k_hat " << k_hat << "\n"
            << "clusters " << labels.num_clusters() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
  std::string kind;
  std::string spec;
  int trials = 10;
  std::uint64_t seed = 0;
  std::vector<int> dims{50, 100, 150, 200, 250};
  double p_quasi = 0.05;
  std::string lambda_mode = "lambda0";
  double lambda_scale = 1.0;
  std::string criterion = "bic";
  std::optional<double> h0;
  int clusters = 2;
  int dim = 2;
  int cluster_size = 100;
  double mean_variance = 2.0;
  int bins = 20;
  int inf1_restarts = 50;
  int jobs = 1;
  bool svg = false;
  std::string out;
  SolverArgs solver;
};

int cmd_experiment(const ExperimentArgs& a) {
  if (!a.spec.empty()) require_file(a.spec, "--spec");
  if (a.out.empty()) throw ValidationError("--out is required");
  fs::create_directories(a.out);

  harness::ExperimentConfig c;
  if (!a.spec.empty()) c.spec = io::read_spec(a.spec);
  c.recipe = harness::RandomSpecRecipe{a.clusters, a.dim, a.cluster_size, a.mean_variance};
  c.trials = a.trials;
  c.base_seed = a.seed;
  c.dims = a.dims;
  c.p_quasi = a.p_quasi;
  c.lambda_mode = a.lambda_mode == "grid" ? harness::LambdaMode::grid : harness::LambdaMode::true_lambda0;
  c.lambda_scale = a.lambda_scale;
  c.criterion = a.criterion == "aic" ? harness::Criterion::aic : harness::Criterion::bic;
  c.h0 = a.h0;
  c.solver = a.solver.options(a.seed);
  c.jobs = a.jobs;
  c.histogram_bins = a.bins;
  c.inf1_restarts = a.inf1_restarts;
  c.validate();

  const fs::path dir(a.out);
  bool all_converged = true;
  if (a.kind == "recovery") {
    const auto records = harness::run_recovery_experiment(c);
    io::write_text((dir / "recovery.json").string(), harness::recovery_json(c, records));
    io::write_text((dir / "recovery.csv").string(), harness::records_csv(records));
    io::write_text((dir / "recovery_timings.csv").string(), harness::timings_csv(records));
    int exact = 0;
    for (const auto& r : records) {
      exact += r.pi_n == 0.0 ? 1 : 0;
      all_converged = all_converged && r.converged;
    }
    std::cout << "trials " << records.size() << "\n" << "exact_recoveries " << exact << "\n";
  } else if (a.kind == "concentration") {
    const auto s = harness::run_concentration_experiment(c);
    io::write_text((dir / "concentration.json").string(), harness::concentration_json(c, s));
    io::write_text((dir / "concentration.csv").string(), harness::concentration_csv(s));
    std::cout << "mean_norm " << io::format_double(s.mean_norm) << "\n"
              << "all_within " << (s.all_within ? "true" : "false") << "\n";
  } else if (a.kind == "sparsity") {
    const auto s = harness::run_sparsity_experiment(c);
    io::write_text((dir / "sparsity.json").string(), harness::sparsity_json(c, s));
    std::vector<harness::TrialRecord> all;
    for (const auto& d : s.dims) all.insert(all.end(), d.trials.begin(), d.trials.end());
    for (const auto& r : all) all_converged = all_converged && r.converged;
    io::write_text((dir / "sparsity.csv").string(), harness::records_csv(all));
    io::write_text((dir / "sparsity_histogram.csv").string(), harness::sparsity_histogram_csv(s));
    io::write_text((dir / "sparsity_timings.csv").string(), harness::timings_csv(all));
    for (const auto& d : s.dims) {
      std::cout << "d " << d.d << " median_ratio " << io::format_double(d.median_ratio) << "\n";
    }
  } else {
    throw ValidationError("unknown experiment kind '" + a.kind +
                          "' (valid kinds: recovery, concentration, sparsity)");
  }

  if (a.svg) {
    // Heatmap of the first trial's affinity matrix (fixed spec, or the recipe draw).
    std::mt19937_64 rng(a.seed);
    const gmm::GaussianMixtureSpec spec = c.spec ? *c.spec : harness::random_spec(c.recipe, rng);
    if (spec.total_size() <= io::kMaxHeatmapSize) {
      const auto data = gmm::sample(spec, c.spec ? a.seed : rng());
      const double h0 = c.h0 ? *c.h0 : affinity::default_h0(data.points);
      const auto am = affinity::build_matrix(data.points, affinity::AffinityFn::gaussian(h0));
      io::write_text((dir / (a.kind + "_affinity.svg")).string(), io::heatmap_svg(am.entries));
    } else {
      std::cerr << "warning: heatmap skipped (n > " << io::kMaxHeatmapSize << ")\n";
    }
  }
  if (!all_converged) {
    std::cerr << "warning: some solves did not reach their tolerance\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster-matrix estimation by semidefinite relaxation, spectral embedding and "
               "Monte Carlo checks of the recovery bounds"};
  app.require_subcommand(1);
  std::string config_path;  // consumed by expand_config; declared for --help
  auto with_config = [&config_path](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON object whose keys are long flag names");
  };

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "sample a labeled dataset from a mixture spec");
  with_config(g);
  g->add_option("--spec", gen.spec, "mixture spec (JSON)")->required();
  g->add_option("--seed", gen.seed, "random seed")->capture_default_str();
  g->add_option("--out", gen.out, "dataset CSV to write")->required();
  g->add_option("--h0", gen.h0, "bandwidth for the printed separation report");

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "estimate the cluster matrix");
  with_config(s);
  s->add_option("--data", sol.data, "dataset CSV (features, optional label column)");
  s->add_option("--matrix", sol.matrix, "precomputed affinity matrix (CSV or .bin)");
  s->add_option("--lambda", sol.lambda, "sum constraint: a number, lambda0 (from labels) or auto")
      ->capture_default_str();
  s->add_option("--criterion", sol.criterion, "model selection for --lambda auto")
      ->check(CLI::IsMember({"bic", "aic"}))
      ->capture_default_str();
  s->add_option("--seed", sol.seed, "random seed")->capture_default_str();
  s->add_option("--out", sol.out, "output prefix")->required();
  s->add_option("--format", sol.format, "matrix output format")
      ->check(CLI::IsMember({"csv", "bin"}))
      ->capture_default_str();
  sol.affinity.add_to(s);
  sol.solver.add_to(s);

  EmbedArgs emb;
  auto* e = app.add_subcommand("embed-cluster", "embed an estimated cluster matrix and cluster it");
  with_config(e);
  e->add_option("--zhat", emb.zhat, "estimated cluster matrix (CSV or .bin)")->required();
  e->add_option("--k", emb.k, "embedding dimension: a positive integer or auto")->capture_default_str();
  e->add_option("--method", emb.method, "clustering method")
      ->check(CLI::IsMember({"threshold", "mst"}))
      ->capture_default_str();
  e->add_option("--points", emb.points, "points for mst: embedded coordinates or raw data")
      ->check(CLI::IsMember({"embedded", "raw"}))
      ->capture_default_str();
  e->add_option("--data", emb.data, "dataset CSV (for --points raw)");
  e->add_option("--out", emb.out, "output prefix")->required();

  ExperimentArgs ex;
  auto* x = app.add_subcommand("experiment", "seeded Monte Carlo experiments");
  with_config(x);
  x->add_option("kind", ex.kind, "recovery, concentration or sparsity")->required();
  x->add_option("--spec", ex.spec, "fixed mixture spec (JSON); default draws from the recipe");
  x->add_option("--trials", ex.trials, "trials (per dimension for sparsity)")->capture_default_str();
  x->add_option("--seed", ex.seed, "base seed")->capture_default_str();
  x->add_option("--dims", ex.dims, "dimensions for the sparsity sweep")->capture_default_str();
  x->add_option("--p-quasi", ex.p_quasi, "exponent of the l^p power sum")->capture_default_str();
  x->add_option("--lambda-mode", ex.lambda_mode, "lambda0 (true sizes) or grid (model selection)")
      ->check(CLI::IsMember({"lambda0", "grid"}))
      ->capture_default_str();
  x->add_option("--lambda-scale", ex.lambda_scale, "lambda = scale * lambda0")->capture_default_str();
  x->add_option("--criterion", ex.criterion, "model selection for grid mode")
      ->check(CLI::IsMember({"bic", "aic"}))
      ->capture_default_str();
  x->add_option("--h0", ex.h0, "fixed bandwidth (default: data heuristic)");
  x->add_option("--clusters", ex.clusters, "recipe: number of clusters")->capture_default_str();
  x->add_option("--dim", ex.dim, "recipe: dimension")->capture_default_str();
  x->add_option("--cluster-size", ex.cluster_size, "recipe: samples per cluster")->capture_default_str();
  x->add_option("--mean-variance", ex.mean_variance, "recipe: variance of the cluster means")
      ->capture_default_str();
  x->add_option("--bins", ex.bins, "histogram bins")->capture_default_str();
  x->add_option("--inf1-restarts", ex.inf1_restarts, "restarts of the inf->1 lower bound")
      ->capture_default_str();
  x->add_option("--jobs", ex.jobs, "worker threads")->capture_default_str();
  x->add_flag("--svg", ex.svg, "also write an affinity heatmap of the first trial");
  x->add_option("--out", ex.out, "output directory")->required();
  ex.solver.add_to(x);

  try {
    std::vector<std::string> args = expand_config(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForVersion& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*s) return cmd_solve(sol);
    if (*e) return cmd_embed_cluster(emb);
    if (*x) return cmd_experiment(ex);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
