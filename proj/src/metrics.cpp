#include "sepals/metrics.hpp"

#include "sepals/csv.hpp"
#include "sepals/epls.hpp"
#include "sepals/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace sepals::metrics {

namespace {

constexpr double kRelativeSpread = 1e-9;
constexpr double kFailureFlagRate = 0.10;

// Pearson correlation; `scale` is the magnitude a and b are measured
// against when deciding that a spread is zero.
double pearson(const Vector& a, const Vector& b, double scale_a, double scale_b) {
  const double ma = a.mean();
  const double mb = b.mean();
  const Vector da = a.array() - ma;
  const Vector db = b.array() - mb;
  const double m = static_cast<double>(a.size());
  const double sa = std::sqrt(da.squaredNorm() / m);
  const double sb = std::sqrt(db.squaredNorm() / m);
  if (!(sa > kRelativeSpread * scale_a) || !(sb > kRelativeSpread * scale_b)) {
    throw DegenerateSubsample("zero variance on the exceedance subsample");
  }
  return std::clamp(da.dot(db) / (m * sa * sb), -1.0, 1.0);
}

struct Exceedances {
  Vector projection;
  std::vector<Eigen::Index> rows;
  double x_scale;
};

Exceedances exceedances(const Dataset& data, const Direction& beta, double y) {
  if (beta.size() != data.p()) {
    throw DomainError("tail correlation: dimension mismatch");
  }
  Exceedances e;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    if (data.Y()[i] >= y) e.rows.push_back(i);
  }
  if (e.rows.size() < 3) {
    throw DegenerateSubsample("need at least 3 exceedances, found " +
                              std::to_string(e.rows.size()));
  }
  const auto m = static_cast<Eigen::Index>(e.rows.size());
  e.projection.resize(m);
  double sq = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto row = data.X().row(e.rows[static_cast<std::size_t>(r)]);
    e.projection[r] = row.dot(beta.coords());
    sq += row.squaredNorm();
  }
  e.x_scale = std::sqrt(sq / static_cast<double>(m));
  return e;
}

double rms(const Vector& v) { return std::sqrt(v.squaredNorm() / static_cast<double>(v.size())); }

// Order statistic at probability q (inverse empirical CDF).
double lower_quantile(const std::vector<double>& sorted, double q) {
  const auto m = static_cast<double>(sorted.size());
  const auto idx = static_cast<std::ptrdiff_t>(std::ceil(q * m)) - 1;
  return sorted[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
      idx, 0, static_cast<std::ptrdiff_t>(sorted.size()) - 1))];
}

}  // namespace

double similarity_r(std::span<const Direction> estimates, const Direction& beta_true) {
  if (estimates.empty()) {
    throw DomainError("similarity_r: no estimates");
  }
  double acc = 0.0;
  for (const auto& b : estimates) {
    const double ip = b.dot(beta_true);
    acc += ip * ip;
  }
  return acc / static_cast<double>(estimates.size());
}

double tail_corr_y(const Dataset& data, const Direction& beta, double y) {
  const auto e = exceedances(data, beta, y);
  Vector resp(e.projection.size());
  for (Eigen::Index r = 0; r < resp.size(); ++r) {
    resp[r] = data.Y()[e.rows[static_cast<std::size_t>(r)]];
  }
  return pearson(e.projection, resp, e.x_scale, rms(resp));
}

double tail_corr_x(const Dataset& data, const Direction& beta, double y, Eigen::Index j) {
  if (j < 0 || j >= data.p()) {
    throw DomainError("tail_corr_x: coordinate index out of range");
  }
  const auto e = exceedances(data, beta, y);
  Vector coord(e.projection.size());
  for (Eigen::Index r = 0; r < coord.size(); ++r) {
    coord[r] = data.X()(e.rows[static_cast<std::size_t>(r)], j);
  }
  return pearson(e.projection, coord, e.x_scale, e.x_scale);
}

bool SweepResult::flagged(Eigen::Index h, Eigen::Index k) const {
  return static_cast<double>(failures(h, k)) >
         kFailureFlagRate * static_cast<double>(replications);
}

std::size_t SweepResult::flagged_cells() const {
  std::size_t count = 0;
  for (Eigen::Index h = 0; h < failures.rows(); ++h)
    for (Eigen::Index k = 0; k < failures.cols(); ++k)
      if (flagged(h, k)) ++count;
  return count;
}

SweepResult run_sweep(const simulate::SimConfig& config, const SweepSpec& spec) {
  using shrinkage::PriorFamily;
  config.validate();
  if (spec.replications < 1) {
    throw DomainError("run_sweep: need at least one replication");
  }
  if (spec.k_grid.empty() || spec.hyper_grid.empty()) {
    throw DomainError("run_sweep: empty k or hyperparameter grid");
  }
  for (double h : spec.hyper_grid) {
    if (!(h >= 0.0)) throw DomainError("run_sweep: hyperparameters must be non-negative");
  }
  const Direction beta = config.true_beta();
  const Direction mu0 = spec.mu0.value_or(beta);
  if (static_cast<std::size_t>(mu0.size()) != config.p) {
    throw DomainError("run_sweep: mu0 has the wrong dimension");
  }

  const std::size_t H = spec.hyper_grid.size();
  const std::size_t K = spec.k_grid.size();
  const std::size_t N = spec.replications;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  // values[(r * H + h) * K + k] = <beta_hat, beta>^2, NaN on failure.
  std::vector<double> values(N * H * K, nan);

  auto replicate = [&](std::size_t r) {
    const auto sim = simulate::simulate_dataset(config, r);
    for (std::size_t kk = 0; kk < K; ++kk) {
      std::optional<epls::FitResult> fit;
      try {
        fit = epls::fit_epls(sim.data, spec.k_grid[kk], spec.theta_n);
      } catch (const DegenerateDirection&) {
        continue;
      } catch (const BadThreshold&) {
        continue;
      }
      for (std::size_t h = 0; h < H; ++h) {
        const double hyper = spec.hyper_grid[h];
        try {
          Direction est = fit->beta;
          if (spec.family == PriorFamily::Conjugate) {
            est = shrinkage::conjugate_map(*fit, mu0, hyper).direction;
          } else if (spec.family == PriorFamily::Sparse) {
            est = shrinkage::sparse_map(*fit, hyper);
          }
          const double ip = est.dot(beta);
          values[(r * H + h) * K + kk] = ip * ip;
        } catch (const DegenerateDirection&) {
        } catch (const OverShrunk&) {
        }
      }
    }
  };

  const std::size_t jobs = std::clamp<std::size_t>(spec.jobs, 1, N);
  if (jobs == 1) {
    for (std::size_t r = 0; r < N; ++r) replicate(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t r = next++; r < N; r = next++) replicate(r);
      });
    }
  }

  SweepResult out;
  out.family = spec.family;
  out.k_grid = spec.k_grid;
  out.hyper_grid = spec.hyper_grid;
  out.replications = N;
  const auto Hi = static_cast<Eigen::Index>(H);
  const auto Ki = static_cast<Eigen::Index>(K);
  out.mean_R = Matrix::Constant(Hi, Ki, nan);
  out.q05_R = Matrix::Constant(Hi, Ki, nan);
  out.q95_R = Matrix::Constant(Hi, Ki, nan);
  out.failures = Eigen::MatrixXi::Zero(Hi, Ki);
  std::vector<double> cell;
  cell.reserve(N);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t kk = 0; kk < K; ++kk) {
      cell.clear();
      for (std::size_t r = 0; r < N; ++r) {
        const double v = values[(r * H + h) * K + kk];
        if (!std::isnan(v)) cell.push_back(v);
      }
      const auto hi = static_cast<Eigen::Index>(h);
      const auto ki = static_cast<Eigen::Index>(kk);
      out.failures(hi, ki) = static_cast<int>(N - cell.size());
      if (cell.empty()) continue;
      double sum = 0.0;
      for (double v : cell) sum += v;
      out.mean_R(hi, ki) = sum / static_cast<double>(cell.size());
      std::sort(cell.begin(), cell.end());
      out.q05_R(hi, ki) = lower_quantile(cell, 0.05);
      out.q95_R(hi, ki) = lower_quantile(cell, 0.95);
    }
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "family,hyper,k,mean_r,q05,q95,failures\n";
  const auto family = shrinkage::family_name(result.family);
  for (std::size_t h = 0; h < result.hyper_grid.size(); ++h) {
    for (std::size_t kk = 0; kk < result.k_grid.size(); ++kk) {
      const auto hi = static_cast<Eigen::Index>(h);
      const auto ki = static_cast<Eigen::Index>(kk);
      out << family << ',' << csv::format_real(result.hyper_grid[h]) << ','
          << result.k_grid[kk] << ',' << csv::format_real(result.mean_R(hi, ki)) << ','
          << csv::format_real(result.q05_R(hi, ki)) << ','
          << csv::format_real(result.q95_R(hi, ki)) << ',' << result.failures(hi, ki) << '\n';
    }
  }
}

}  // namespace sepals::metrics
