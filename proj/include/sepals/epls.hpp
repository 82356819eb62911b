#pragma once

#include "sepals/types.hpp"

#include <cstddef>

namespace sepals::epls {

/// Output of a single EPLS fit at threshold y_threshold.
struct FitResult {
  Direction beta;
  double y_threshold;
  /// Effective number of exceedances #{i : Y_i >= y_threshold}; exceeds the
  /// requested k when the k-th largest response is tied.
  std::size_t k;
  double v_norm;
  /// theta_n * v_norm, the likelihood weight in the posterior.
  double K_n;
};

/// (1/n) #{i : Y_i >= y}.
double empirical_survival(double y, const Vector& Y);

/// (1/n) sum_i Y_i 1{Y_i >= y}.
double truncated_mean(double y, const Vector& Y);

/// Phi_i = (1/n) (Fbar(y) Y_i - m(y)) 1{Y_i >= y}. Exactly zero off the
/// exceedance set, and the weights always sum to zero.
Vector phi_weights(double y, const Vector& Y);

/// v(y) = sum_i X_i Phi_i(y).
Vector v_hat(double y, const Dataset& data);

/// The k-th largest response. Throws BadThreshold unless 1 <= k <= n.
double threshold_for_k(const Vector& Y, std::size_t k);

/// EPLS direction using the k largest responses. Throws BadThreshold when k
/// is out of [1, n] or theta_n <= 0, and DegenerateDirection when
/// ||v|| < 1e-14 (always the case for k = 1).
FitResult fit_epls(const Dataset& data, std::size_t k, double theta_n = 1.0);

/// Same estimator at an explicit threshold y.
FitResult fit_epls_at(const Dataset& data, double y, double theta_n = 1.0);

/// vMF-ball log-likelihood of beta, dropping every beta-free term:
/// theta_n * <beta, v(y)>. Its argmax over the sphere is the EPLS direction.
double ball_loglik(const Direction& beta, const Dataset& data, double y, double theta_n);

}  // namespace sepals::epls
