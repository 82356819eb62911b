#pragma once

#include "sepals/types.hpp"

#include <cstddef>
#include <vector>

namespace sepals::tail {

/// Responses sorted ascending (stable; ties kept).
std::vector<double> order_statistics(const Vector& Y);

/// Hill estimate (1/k) sum_{i=1..k} log(Y_{n-i+1,n} / Y_{n-k,n}).
/// Throws BadThreshold unless 1 <= k <= n-1, NonPositiveTail when
/// Y_{n-k,n} <= 0.
double hill(const Vector& Y, std::size_t k);

struct HillCurve {
  std::vector<std::size_t> k_values;
  std::vector<double> gamma_hat;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
};

/// Hill estimates for k = 1..k_max with the normal-approximation 95% band
/// gamma_hat (1 +/- 1.96 / sqrt(k)). Requires 2 <= k_max <= n-1.
HillCurve hill_curve(const Vector& Y, std::size_t k_max);

struct QQPoint {
  double x;
  double y;
};

struct QQData {
  /// (log(k/i), log(Y_{n-i+1,n} / Y_{n-k,n})) ordered by i = 1..k.
  std::vector<QQPoint> points;
  /// Least-squares slope of the line through the origin.
  double slope;
};

/// Exponential quantile plot of the k largest log-excesses.
QQData qq_data(const Vector& Y, std::size_t k);

struct HistogramBin {
  double left;
  double right;
  std::size_t count;
};

/// Histogram with Freedman-Diaconis bin width 2 IQR n^{-1/3}. Falls back to
/// a single bin when the IQR or the range is zero.
std::vector<HistogramBin> histogram_fd(const Vector& Y);

}  // namespace sepals::tail
