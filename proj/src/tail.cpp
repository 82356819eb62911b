#include "sepals/tail.hpp"

#include "sepals/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sepals::tail {

namespace {

constexpr double kZ975 = 1.959963984540054;

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k + 1 > n) {
    throw BadThreshold("k = " + std::to_string(k) + " outside [1, n-1] with n = " +
                       std::to_string(n));
  }
}

// Reference point Y_{n-k,n} in a 0-based ascending array.
double reference(const std::vector<double>& sorted, std::size_t k) {
  const double ref = sorted[sorted.size() - k - 1];
  if (!(ref > 0.0)) {
    throw NonPositiveTail("order statistic Y_{n-k,n} = " + std::to_string(ref) +
                          " is not positive (k = " + std::to_string(k) + ")");
  }
  return ref;
}

// Mean of the k top log-excesses over the ascending sample.
double hill_sorted(const std::vector<double>& sorted, std::size_t k) {
  const double log_ref = std::log(reference(sorted, k));
  const std::size_t n = sorted.size();
  double acc = 0.0;
  for (std::size_t i = 1; i <= k; ++i) {
    acc += std::log(sorted[n - i]) - log_ref;
  }
  return acc / static_cast<double>(k);
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::vector<double> order_statistics(const Vector& Y) {
  std::vector<double> sorted(Y.data(), Y.data() + Y.size());
  std::stable_sort(sorted.begin(), sorted.end());
  return sorted;
}

double hill(const Vector& Y, std::size_t k) {
  check_k(k, static_cast<std::size_t>(Y.size()));
  return hill_sorted(order_statistics(Y), k);
}

HillCurve hill_curve(const Vector& Y, std::size_t k_max) {
  const auto n = static_cast<std::size_t>(Y.size());
  if (k_max < 2 || k_max + 1 > n) {
    throw BadThreshold("k_max = " + std::to_string(k_max) + " outside [2, n-1] with n = " +
                       std::to_string(n));
  }
  const auto sorted = order_statistics(Y);
  HillCurve curve;
  curve.k_values.reserve(k_max);
  curve.gamma_hat.reserve(k_max);
  curve.ci_low.reserve(k_max);
  curve.ci_high.reserve(k_max);
  // Running sum of log(Y_{n-i+1,n}); gamma(k) = mean of the top k minus
  // log Y_{n-k,n}.
  double top_log_sum = 0.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    top_log_sum += std::log(sorted[n - k]);
    const double g = top_log_sum / static_cast<double>(k) - std::log(reference(sorted, k));
    const double half_width = kZ975 / std::sqrt(static_cast<double>(k));
    curve.k_values.push_back(k);
    curve.gamma_hat.push_back(g);
    curve.ci_low.push_back(g * (1.0 - half_width));
    curve.ci_high.push_back(g * (1.0 + half_width));
  }
  return curve;
}

QQData qq_data(const Vector& Y, std::size_t k) {
  const auto n = static_cast<std::size_t>(Y.size());
  check_k(k, n);
  const auto sorted = order_statistics(Y);
  const double log_ref = std::log(reference(sorted, k));
  QQData out;
  out.points.reserve(k);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 1; i <= k; ++i) {
    const double x = std::log(static_cast<double>(k) / static_cast<double>(i));
    const double y = std::log(sorted[n - i]) - log_ref;
    out.points.push_back({x, y});
    sxy += x * y;
    sxx += x * x;
  }
  out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return out;
}

std::vector<HistogramBin> histogram_fd(const Vector& Y) {
  if (Y.size() == 0) {
    throw DomainError("histogram_fd: empty sample");
  }
  const auto sorted = order_statistics(Y);
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double n = static_cast<double>(sorted.size());
  std::size_t bins = 1;
  if (iqr > 0.0 && hi > lo) {
    const double width = 2.0 * iqr / std::cbrt(n);
    bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    bins = std::clamp<std::size_t>(bins, 1, sorted.size());
  }
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].left = lo + width * static_cast<double>(b);
    out[b].right = b + 1 == bins ? (hi > lo ? hi : lo + width) : lo + width * static_cast<double>(b + 1);
    out[b].count = 0;
  }
  for (double y : sorted) {
    auto b = static_cast<std::size_t>((y - lo) / width);
    out[std::min(b, bins - 1)].count++;
  }
  return out;
}

}  // namespace sepals::tail
