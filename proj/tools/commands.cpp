#include "commands.hpp"

#include "cli_common.hpp"

#include "sepals/epls.hpp"
#include "sepals/error.hpp"
#include "sepals/metrics.hpp"
#include "sepals/shrinkage.hpp"
#include "sepals/simulate.hpp"
#include "sepals/tail.hpp"

#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

namespace sepals::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

struct SimFlags {
  std::size_t n = 500;
  std::size_t p = 30;
  double gamma = 0.2;
  double scale = 2.0;
  double c = 1.0;
  double theta = 0.5;
  bool rotated = false;
  double snr = 10.0;
  std::uint64_t seed = 42;
  std::string beta;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--n", n, "Sample size")->capture_default_str()->check(CLI::Range(2, std::numeric_limits<int>::max()));
    cmd->add_option("--p", p, "Dimension")->capture_default_str()->check(CLI::Range(2, std::numeric_limits<int>::max()));
    cmd->add_option("--gamma", gamma, "Tail index of Y, in (0, 1)")->capture_default_str();
    cmd->add_option("--scale", scale, "Pareto scale a")->capture_default_str();
    cmd->add_option("--c", c, "Link exponent, g(t) = t^c")->capture_default_str();
    cmd->add_option("--theta", theta, "Clayton parameter (0 = independence)")->capture_default_str();
    cmd->add_flag("--rotated", rotated, "Use the rotated Clayton copula");
    cmd->add_option("--snr", snr, "Signal-to-noise ratio g(Fbar^{-1}(1/n)) / sigma")->capture_default_str();
    cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    cmd->add_option("--beta", beta, "True direction as p comma-separated reals (default (1,1,0,...)/sqrt 2)");
  }

  simulate::SimConfig config() const {
    simulate::SimConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.gamma_y = gamma;
    cfg.a = scale;
    cfg.c = c;
    cfg.theta = theta;
    cfg.rotated = rotated;
    cfg.snr = snr;
    cfg.seed = seed;
    if (!beta.empty()) {
      cfg.beta = Direction::normalize(parse_vector(beta, static_cast<Eigen::Index>(p), "--beta"));
    }
    try {
      cfg.validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

fs::path manifest_path(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

// ---------------------------------------------------------------- simulate

void add_simulate(CLI::App& app) {
  struct Opts {
    SimFlags sim;
    std::uint64_t replication = 0;
    std::string out;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("simulate", "Draw a dataset from the Pareto / Clayton inverse-regression model");
  opts->sim.add_to(cmd);
  cmd->add_option("--replication", opts->replication, "Replication substream index")->capture_default_str();
  cmd->add_option("--out", opts->out, "Output CSV path")->required();
  cmd->callback([opts, cmd] {
    const auto cfg = opts->sim.config();
    const auto sim = simulate::simulate_dataset(cfg, opts->replication);
    std::ostringstream body;
    csv::write_dataset(body, sim.data);
    write_text(opts->out, body.str());
    auto manifest = make_manifest(*cmd, cfg.seed);
    manifest["sigma"] = sim.sigma;
    manifest["beta"] = to_json(cfg.true_beta().coords());
    write_json(manifest_path(opts->out), manifest);
  });
}

// --------------------------------------------------------------------- fit

struct PriorFlags {
  std::string family = "none";
  double kappa0 = 0.0;
  std::string mu0;
  double lambda = 0.0;
  double theta_n = 1.0;

  shrinkage::Prior prior(Eigen::Index p, CLI::App* cmd) const {
    shrinkage::Prior prior;
    prior.theta_n = theta_n;
    switch (shrinkage::parse_family(family)) {
      case shrinkage::PriorFamily::None:
        break;
      case shrinkage::PriorFamily::Conjugate:
        if (cmd->count("--mu0") == 0) throw UsageError("--prior conjugate requires --mu0");
        prior.kind = shrinkage::ConjugatePrior{Direction::normalize(parse_vector(mu0, p, "--mu0")), kappa0};
        break;
      case shrinkage::PriorFamily::Sparse:
        prior.kind = shrinkage::SparsePrior{lambda};
        break;
    }
    try {
      prior.validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    return prior;
  }
};

void add_fit(CLI::App& app) {
  struct Opts {
    std::string data;
    std::size_t k = 0;
    double threshold = 0.0;
    PriorFlags prior;
    bool standardize = false;
    std::string y_col;
    std::string beta_true;
    std::string out;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("fit", "Fit the EPLS direction, optionally with a shrinkage prior");
  cmd->add_option("--data", opts->data, "Input CSV (last column is the response)")->required();
  auto* k_opt = cmd->add_option("--k", opts->k, "Number of exceedances");
  auto* t_opt = cmd->add_option("--threshold", opts->threshold, "Explicit response threshold");
  k_opt->excludes(t_opt);
  cmd->add_option("--prior", opts->prior.family, "none | conjugate | sparse")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "conjugate", "sparse"}));
  cmd->add_option("--kappa0", opts->prior.kappa0, "Conjugate prior concentration")->capture_default_str();
  cmd->add_option("--mu0", opts->prior.mu0, "Conjugate prior location, p comma-separated reals");
  cmd->add_option("--lambda", opts->prior.lambda, "Sparse prior strength")->capture_default_str();
  cmd->add_option("--theta-n", opts->prior.theta_n, "Likelihood scale theta_n")->capture_default_str();
  cmd->add_flag("--standardize", opts->standardize, "Divide covariates by their standard deviation");
  cmd->add_option("--y-col", opts->y_col, "Name of the response column");
  cmd->add_option("--beta-true", opts->beta_true, "Reference direction; reports r = <beta_hat, beta>^2");
  cmd->add_option("--out", opts->out, "Output JSON path (stdout when omitted)");
  cmd->callback([opts, cmd, k_opt, t_opt] {
    if (k_opt->count() == 0 && t_opt->count() == 0) throw UsageError("one of --k or --threshold is required");
    auto labeled = load_dataset(opts->data, opts->y_col.empty() ? std::nullopt : std::optional(opts->y_col));
    const Dataset data = opts->standardize ? standardize_columns(labeled.data) : labeled.data;
    const shrinkage::Prior prior = opts->prior.prior(data.p(), cmd);

    const epls::FitResult fit = k_opt->count() > 0 ? epls::fit_epls(data, opts->k, prior.theta_n)
                                                   : epls::fit_epls_at(data, opts->threshold, prior.theta_n);
    const Direction beta = shrinkage::map_estimate(fit, prior);

    ordered_json result;
    result["beta"] = to_json(beta.coords());
    result["k_effective"] = fit.k;
    result["y_threshold"] = fit.y_threshold;
    result["v_norm"] = fit.v_norm;
    result["K_n"] = fit.K_n;
    ordered_json echo;
    echo["family"] = opts->prior.family;
    echo["theta_n"] = prior.theta_n;
    if (const auto* c = std::get_if<shrinkage::ConjugatePrior>(&prior.kind)) {
      echo["kappa0"] = c->kappa0;
      echo["mu0"] = to_json(c->mu0.coords());
      const auto post = shrinkage::conjugate_map(fit, c->mu0, c->kappa0);
      result["posterior_kappa"] = post.kappa;
    } else if (const auto* s = std::get_if<shrinkage::SparsePrior>(&prior.kind)) {
      echo["lambda"] = s->lambda;
      ordered_json support = ordered_json::array();
      for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (beta[j] != 0.0) support.push_back(j + 1);
      }
      result["nonzero_support"] = std::move(support);
    }
    result["prior"] = std::move(echo);
    result["covariates"] = labeled.covariate_names;
    if (!opts->beta_true.empty()) {
      const Direction ref = Direction::normalize(parse_vector(opts->beta_true, data.p(), "--beta-true"));
      const double ip = beta.dot(ref);
      result["r"] = ip * ip;
    }
    if (opts->out.empty()) {
      std::cout << result.dump(2) << '\n';
    } else {
      write_json(opts->out, result);
      write_json(manifest_path(opts->out), make_manifest(*cmd, std::nullopt));
    }
  });
}

// ------------------------------------------------------------------- sweep

void add_sweep(CLI::App& app) {
  struct Opts {
    SimFlags sim;
    std::string family;
    std::string hyper_grid = "0";
    std::string mu0 = "beta";
    std::size_t k_min = 1;
    std::size_t k_max = 100;
    std::size_t reps = 100;
    std::size_t jobs = 1;
    double theta_n = 1.0;
    std::string out;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("sweep", "Monte Carlo similarity sweep over k and a hyperparameter grid");
  opts->sim.add_to(cmd);
  cmd->add_option("--family", opts->family, "none | conjugate | sparse")
      ->required()
      ->check(CLI::IsMember({"none", "conjugate", "sparse"}));
  cmd->add_option("--hyper-grid", opts->hyper_grid, "kappa0 or lambda values, comma-separated")->capture_default_str();
  cmd->add_option("--mu0", opts->mu0, "Prior location: 'beta', 'tilde' or p comma-separated reals")->capture_default_str();
  cmd->add_option("--k-min", opts->k_min, "Smallest k")->capture_default_str();
  cmd->add_option("--k-max", opts->k_max, "Largest k")->capture_default_str();
  cmd->add_option("--reps", opts->reps, "Replications N")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", opts->jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--theta-n", opts->theta_n, "Likelihood scale theta_n")->capture_default_str();
  cmd->add_option("--out", opts->out, "Output CSV path")->required();
  cmd->callback([opts, cmd] {
    const auto cfg = opts->sim.config();
    if (opts->k_min < 1 || opts->k_min > opts->k_max || opts->k_max > cfg.n) {
      throw UsageError("need 1 <= k-min <= k-max <= n");
    }
    if (!(opts->theta_n > 0.0)) throw UsageError("--theta-n must be positive");
    metrics::SweepSpec spec;
    spec.family = shrinkage::parse_family(opts->family);
    try {
      spec.hyper_grid = csv::parse_real_list(opts->hyper_grid);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--hyper-grid: ") + e.what());
    }
    if (spec.hyper_grid.empty()) throw UsageError("--hyper-grid is empty");
    for (double h : spec.hyper_grid) {
      if (!(h >= 0.0)) throw UsageError("--hyper-grid values must be non-negative");
    }
    if (opts->mu0 == "beta") {
      spec.mu0 = cfg.true_beta();
    } else if (opts->mu0 == "tilde") {
      spec.mu0 = Direction::leading_ones(cfg.p, cfg.p / 2);
    } else {
      spec.mu0 = Direction::normalize(parse_vector(opts->mu0, static_cast<Eigen::Index>(cfg.p), "--mu0"));
    }
    for (std::size_t k = opts->k_min; k <= opts->k_max; ++k) spec.k_grid.push_back(k);
    spec.replications = opts->reps;
    spec.jobs = opts->jobs;
    spec.theta_n = opts->theta_n;

    const auto result = metrics::run_sweep(cfg, spec);
    std::ostringstream body;
    metrics::write_sweep_csv(body, result);
    write_text(opts->out, body.str());
    auto manifest = make_manifest(*cmd, cfg.seed);
    manifest["flagged_cells"] = result.flagged_cells();
    write_json(manifest_path(opts->out), manifest);
    if (result.flagged_cells() > 0) {
      std::cerr << "warning: " << result.flagged_cells()
                << " cell(s) had more than 10% failed fits\n";
    }
  });
}

// -------------------------------------------------------------------- tail

void add_tail(CLI::App& app) {
  struct Opts {
    std::string data;
    std::size_t k_max = 0;
    std::size_t k = 0;
    std::string y_col;
    std::string out_dir;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("tail", "Hill plot, exponential QQ plot and histogram of the response");
  cmd->add_option("--data", opts->data, "Input CSV")->required();
  cmd->add_option("--k-max", opts->k_max, "Largest k of the Hill plot")->required();
  cmd->add_option("--k", opts->k, "Exceedances for the QQ plot (defaults to k-max)");
  cmd->add_option("--y-col", opts->y_col, "Name of the response column");
  cmd->add_option("--out-dir", opts->out_dir, "Directory for hill.csv, qq.csv and hist.csv")->required();
  cmd->callback([opts, cmd] {
    const auto labeled = load_dataset(opts->data, opts->y_col.empty() ? std::nullopt : std::optional(opts->y_col));
    const Vector& Y = labeled.data.Y();
    const auto n = static_cast<std::size_t>(Y.size());
    if (opts->k_max < 2 || opts->k_max + 1 > n) {
      throw UsageError("--k-max must lie in [2, n-1] = [2, " + std::to_string(n - 1) + "]");
    }
    const std::size_t k = opts->k == 0 ? opts->k_max : opts->k;
    if (k + 1 > n) throw UsageError("--k must lie in [1, n-1]");

    const auto curve = tail::hill_curve(Y, opts->k_max);
    const auto qq = tail::qq_data(Y, k);
    const auto hist = tail::histogram_fd(Y);

    std::error_code ec;
    fs::create_directories(opts->out_dir, ec);
    if (ec) throw IoError("cannot create " + opts->out_dir + ": " + ec.message());
    const fs::path dir(opts->out_dir);

    std::ostringstream hill_csv;
    hill_csv << "k,gamma_hat,ci_low,ci_high\n";
    for (std::size_t i = 0; i < curve.k_values.size(); ++i) {
      hill_csv << curve.k_values[i] << ',' << csv::format_real(curve.gamma_hat[i]) << ','
               << csv::format_real(curve.ci_low[i]) << ',' << csv::format_real(curve.ci_high[i]) << '\n';
    }
    write_text(dir / "hill.csv", hill_csv.str());

    std::ostringstream qq_csv;
    qq_csv << "x,y\n";
    for (const auto& pt : qq.points) {
      qq_csv << csv::format_real(pt.x) << ',' << csv::format_real(pt.y) << '\n';
    }
    write_text(dir / "qq.csv", qq_csv.str());

    std::ostringstream hist_csv;
    hist_csv << "bin_left,bin_right,count\n";
    for (const auto& b : hist) {
      hist_csv << csv::format_real(b.left) << ',' << csv::format_real(b.right) << ',' << b.count << '\n';
    }
    write_text(dir / "hist.csv", hist_csv.str());

    ordered_json summary;
    summary["n"] = n;
    summary["k"] = k;
    summary["hill_at_k"] = tail::hill(Y, k);
    summary["qq_slope"] = qq.slope;
    auto manifest = make_manifest(*cmd, std::nullopt);
    manifest["summary"] = summary;
    write_json(dir / "manifest.json", manifest);
    std::cout << summary.dump() << '\n';
  });
}

// ---------------------------------------------------------------- tailcorr

void add_tailcorr(CLI::App& app) {
  struct Opts {
    std::string data;
    std::string family = "sparse";
    std::string lambda_grid;
    std::string k_grid;
    double lambda = 0.0;
    std::string beta;
    double theta_n = 1.0;
    bool standardize = false;
    std::string y_col;
    std::string out;
  };
  auto opts = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("tailcorr", "Conditional tail correlations along k and lambda");
  cmd->add_option("--data", opts->data, "Input CSV")->required();
  cmd->add_option("--family", opts->family, "sparse | none")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "sparse"}));
  auto* grid_opt = cmd->add_option("--lambda-grid", opts->lambda_grid,
                                   "Lambda values: correlation with Y for every (k, lambda)");
  auto* lambda_opt = cmd->add_option("--lambda", opts->lambda,
                                     "Fixed lambda: correlation with every covariate along k");
  auto* beta_opt = cmd->add_option("--beta", opts->beta, "Fixed direction instead of fitting (per-covariate mode)");
  grid_opt->excludes(lambda_opt);
  grid_opt->excludes(beta_opt);
  lambda_opt->excludes(beta_opt);
  cmd->add_option("--k-grid", opts->k_grid, "k values: 'a,b,c' or 'lo:hi[:step]'")->required();
  cmd->add_option("--theta-n", opts->theta_n, "Likelihood scale theta_n")->capture_default_str();
  cmd->add_flag("--standardize", opts->standardize, "Divide covariates by their standard deviation");
  cmd->add_option("--y-col", opts->y_col, "Name of the response column");
  cmd->add_option("--out", opts->out, "Output CSV path")->required();
  cmd->callback([opts, cmd, grid_opt, lambda_opt, beta_opt] {
    const auto labeled = load_dataset(opts->data, opts->y_col.empty() ? std::nullopt : std::optional(opts->y_col));
    const Dataset data = opts->standardize ? standardize_columns(labeled.data) : labeled.data;
    const auto k_grid = parse_index_grid(opts->k_grid);
    const bool sparse = opts->family == "sparse";
    if (!(opts->theta_n > 0.0)) throw UsageError("--theta-n must be positive");

    // Direction at a given k; throws the library's numerical errors.
    auto direction_at = [&](std::size_t k, double lambda) {
      const auto fit = epls::fit_epls(data, k, opts->theta_n);
      return std::pair{sparse ? shrinkage::sparse_map(fit, lambda) : fit.beta, fit.y_threshold};
    };

    std::ostringstream body;
    auto manifest = make_manifest(*cmd, std::nullopt);
    if (grid_opt->count() > 0 || (lambda_opt->count() == 0 && beta_opt->count() == 0)) {
      std::vector<double> lambdas{0.0};
      if (grid_opt->count() > 0) {
        try {
          lambdas = csv::parse_real_list(opts->lambda_grid);
        } catch (const DomainError& e) {
          throw UsageError(std::string("--lambda-grid: ") + e.what());
        }
      } else if (sparse) {
        throw UsageError("--family sparse needs --lambda-grid, --lambda or --beta");
      }
      body << "k,lambda,rho_y,flag\n";
      ordered_json best = nullptr;
      double best_rho = -std::numeric_limits<double>::infinity();
      for (std::size_t k : k_grid) {
        for (double lambda : lambdas) {
          body << k << ',' << csv::format_real(lambda) << ',';
          try {
            const auto [dir, y] = direction_at(k, lambda);
            const double rho = metrics::tail_corr_y(data, dir, y);
            body << csv::format_real(rho) << ",\n";
            if (rho > best_rho) {
              best_rho = rho;
              best = ordered_json{{"k", k}, {"lambda", lambda}, {"rho_y", rho}};
            }
          } catch (const Error& e) {
            body << ',' << e.name() << '\n';
          }
        }
      }
      manifest["argmax"] = best;
      std::cout << ordered_json{{"argmax", best}}.dump() << '\n';
    } else {
      body << "k,j,rho_xj,flag\n";
      std::optional<Direction> fixed;
      if (beta_opt->count() > 0) {
        fixed = Direction::normalize(parse_vector(opts->beta, data.p(), "--beta"));
      }
      for (std::size_t k : k_grid) {
        std::optional<std::pair<Direction, double>> at;
        std::string failure;
        try {
          if (fixed) {
            at.emplace(*fixed, epls::threshold_for_k(data.Y(), k));
          } else {
            at.emplace(direction_at(k, opts->lambda));
          }
        } catch (const Error& e) {
          failure = e.name();
        }
        for (Eigen::Index j = 0; j < data.p(); ++j) {
          body << k << ',' << (j + 1) << ',';
          if (!at) {
            body << ',' << failure << '\n';
            continue;
          }
          try {
            body << csv::format_real(metrics::tail_corr_x(data, at->first, at->second, j)) << ",\n";
          } catch (const Error& e) {
            body << ',' << e.name() << '\n';
          }
        }
      }
    }
    write_text(opts->out, body.str());
    write_json(manifest_path(opts->out), manifest);
  });
}

}  // namespace

void register_commands(CLI::App& app) {
  add_simulate(app);
  add_fit(app);
  add_sweep(app);
  add_tail(app);
  add_tailcorr(app);
}

}  // namespace sepals::cli
