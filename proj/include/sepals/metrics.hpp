#pragma once

#include "sepals/shrinkage.hpp"
#include "sepals/simulate.hpp"
#include "sepals/types.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace sepals::metrics {

/// R = mean over estimates of <beta_hat, beta_true>^2.
double similarity_r(std::span<const Direction> estimates, const Direction& beta_true);

/// Pearson correlation between <X_i, beta> and Y_i over {i : Y_i >= y}.
/// Throws DegenerateSubsample with fewer than 3 exceedances or when either
/// side has (relatively) zero spread.
double tail_corr_y(const Dataset& data, const Direction& beta, double y);

/// Pearson correlation between <X_i, beta> and X_ij over {i : Y_i >= y}.
double tail_corr_x(const Dataset& data, const Direction& beta, double y, Eigen::Index j);

struct SweepResult {
  shrinkage::PriorFamily family = shrinkage::PriorFamily::None;
  std::vector<std::size_t> k_grid;
  std::vector<double> hyper_grid;
  /// Rows index hyper_grid, columns index k_grid. NaN where every
  /// replication failed.
  Matrix mean_R;
  Matrix q05_R;
  Matrix q95_R;
  Eigen::MatrixXi failures;
  std::size_t replications = 0;

  /// More than 10% of the replications failed in this cell.
  bool flagged(Eigen::Index h, Eigen::Index k) const;
  std::size_t flagged_cells() const;
};

struct SweepSpec {
  shrinkage::PriorFamily family = shrinkage::PriorFamily::None;
  std::vector<double> hyper_grid{0.0};
  /// Conjugate prior location; defaults to the true direction.
  std::optional<Direction> mu0;
  std::vector<std::size_t> k_grid;
  std::size_t replications = 100;
  double theta_n = 1.0;
  /// Worker threads; the result does not depend on it.
  std::size_t jobs = 1;
};

/// Monte Carlo sweep: replication r draws its dataset from the substream
/// (config.seed, r), fits EPLS at every k and applies the prior MAP for every
/// hyperparameter. Failed fits are counted and left out of the statistics.
SweepResult run_sweep(const simulate::SimConfig& config, const SweepSpec& spec);

/// Long-format CSV: family,hyper,k,mean_r,q05,q95,failures.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace sepals::metrics
