#include "sepals/vmf.hpp"

#include "sepals/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sepals::vmf {

namespace {

constexpr double kSeriesRelTol = 1e-15;
constexpr double kLogSpaceThreshold = 700.0;
constexpr double kSphereTolerance = 1e-9;

// Terms grow until l ~ kappa/2 before they decay, so the cap must scale
// with kappa for large arguments.
std::size_t max_series_terms(double kappa) {
  return std::max<std::size_t>(500, static_cast<std::size_t>(2.0 * kappa) + 500);
}

void check_bessel_args(double q, double kappa) {
  if (!(q >= 0.0) || !(kappa >= 0.0)) {
    throw DomainError("bessel_i: order and argument must be non-negative");
  }
}

}  // namespace

double bessel_i(double q, double kappa) {
  check_bessel_args(q, kappa);
  if (kappa == 0.0) {
    return q == 0.0 ? 1.0 : 0.0;
  }
  if (kappa > kLogSpaceThreshold) {
    return std::exp(log_bessel_i(q, kappa));
  }
  const double half = 0.5 * kappa;
  const double half_sq = half * half;
  double term = std::exp(q * std::log(half) - std::lgamma(q + 1.0));
  double sum = term;
  const std::size_t cap = max_series_terms(kappa);
  for (std::size_t l = 0; l < cap; ++l) {
    term *= half_sq / ((static_cast<double>(l) + 1.0) * (q + static_cast<double>(l) + 1.0));
    sum += term;
    if (term < kSeriesRelTol * sum) {
      break;
    }
  }
  return sum;
}

double log_bessel_i(double q, double kappa) {
  check_bessel_args(q, kappa);
  if (kappa == 0.0) {
    return q == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  if (kappa <= kLogSpaceThreshold) {
    return std::log(bessel_i(q, kappa));
  }
  const double log_half = std::log(0.5 * kappa);
  double log_term = q * log_half - std::lgamma(q + 1.0);
  double log_sum = log_term;
  const double log_tol = std::log(kSeriesRelTol);
  const std::size_t cap = max_series_terms(kappa);
  for (std::size_t l = 0; l < cap; ++l) {
    log_term += 2.0 * log_half - std::log(static_cast<double>(l) + 1.0) -
                std::log(q + static_cast<double>(l) + 1.0);
    const double hi = std::max(log_sum, log_term);
    log_sum = hi + std::log1p(std::exp(std::min(log_sum, log_term) - hi));
    if (log_term - log_sum < log_tol) {
      break;
    }
  }
  return log_sum;
}

double log_c_p(int p, double kappa) {
  if (p < 2) {
    throw DomainError("log_c_p: dimension must be at least 2");
  }
  if (!(kappa >= 0.0)) {
    throw DomainError("log_c_p: kappa must be non-negative");
  }
  const double half_p = 0.5 * p;
  if (kappa == 0.0) {
    return std::lgamma(half_p) - std::numbers::ln2 - half_p * std::log(std::numbers::pi);
  }
  return (half_p - 1.0) * std::log(kappa) - half_p * std::log(2.0 * std::numbers::pi) -
         log_bessel_i(half_p - 1.0, kappa);
}

double logpdf_sphere(const Vector& x, const Direction& mu, double kappa) {
  if (x.size() != mu.size()) {
    throw DomainError("logpdf_sphere: dimension mismatch");
  }
  if (std::abs(x.norm() - 1.0) > kSphereTolerance) {
    return -std::numeric_limits<double>::infinity();
  }
  return log_c_p(static_cast<int>(x.size()), kappa) + kappa * mu.coords().dot(x);
}

void BallVmfParams::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("BallVmfParams: radius must be positive");
  }
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw DomainError("BallVmfParams: kappa must be non-negative");
  }
}

double logpdf_ball(const Vector& x, const BallVmfParams& params) {
  params.validate();
  if (x.size() != params.mu.size()) {
    throw DomainError("logpdf_ball: dimension mismatch");
  }
  if (x.norm() > params.r) {
    return -std::numeric_limits<double>::infinity();
  }
  const auto p = static_cast<int>(x.size());
  return std::log(2.0 * std::numbers::pi) + log_c_p(p + 2, params.kappa) -
         p * std::log(params.r) + params.kappa * params.mu.coords().dot(x) / params.r;
}

}  // namespace sepals::vmf
