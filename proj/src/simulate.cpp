#include "sepals/simulate.hpp"

#include "sepals/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace sepals::simulate {

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t replication)
    : key_(mix(mix(seed) ^ (replication + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterStream::mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double CounterStream::uniform(std::uint64_t row, std::uint64_t column) const {
  const std::uint64_t bits = mix(mix(key_ ^ row) ^ (column + 0xd1b54a32d192ed03ULL));
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

void SimConfig::validate() const {
  if (n < 2 || p < 2) throw DomainError("SimConfig: need n >= 2 and p >= 2");
  if (!(gamma_y > 0.0 && gamma_y < 1.0)) throw DomainError("SimConfig: gamma_y must lie in (0, 1)");
  if (!(a > 0.0)) throw DomainError("SimConfig: scale a must be positive");
  if (!(c > 0.0)) throw DomainError("SimConfig: link exponent c must be positive");
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw DomainError("SimConfig: theta must be >= 0");
  if (!(snr > 0.0)) throw DomainError("SimConfig: snr must be positive");
  if (beta && static_cast<std::size_t>(beta->size()) != p) {
    throw DomainError("SimConfig: beta has dimension " + std::to_string(beta->size()) +
                      ", expected " + std::to_string(p));
  }
}

Direction SimConfig::true_beta() const {
  return beta ? *beta : Direction::leading_ones(p, 2);
}

double pareto_quantile(double u, double gamma_y, double a) {
  if (!(u > 0.0 && u <= 1.0)) {
    throw DomainError("pareto_quantile: u must lie in (0, 1]");
  }
  return a * std::pow(u, -gamma_y);
}

double sigma_from_snr(const SimConfig& config) {
  config.validate();
  const double top = pareto_quantile(1.0 / static_cast<double>(config.n), config.gamma_y, config.a);
  return std::pow(top, config.c) / config.snr;
}

double clayton_conditional_inverse(double p_unif, double v, double theta) {
  if (!(p_unif > 0.0 && p_unif < 1.0) || !(v > 0.0 && v < 1.0)) {
    throw DomainError("clayton_conditional_inverse: arguments must lie in (0, 1)");
  }
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw DomainError("clayton_conditional_inverse: theta must be >= 0");
  }
  if (theta == 0.0) {
    return p_unif;
  }
  // u = ((p^{-theta/(1+theta)} - 1) v^{-theta} + 1)^{-1/theta}, in log space so
  // that v^{-theta} cannot overflow for large theta.
  const double scale = std::expm1(-theta / (1.0 + theta) * std::log(p_unif));
  const double log_inner = std::log(scale) - theta * std::log(v);
  const double softplus = log_inner > 0.0 ? log_inner + std::log1p(std::exp(-log_inner))
                                          : std::log1p(std::exp(log_inner));
  return std::exp(-softplus / theta);
}

double kendall_tau_clayton(double theta, bool rotated) {
  if (!(theta >= 0.0)) {
    throw DomainError("kendall_tau_clayton: theta must be >= 0");
  }
  const double tau = std::isinf(theta) ? 1.0 : theta / (theta + 2.0);
  return rotated ? -tau : tau;
}

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

// Acklam's rational approximation for the lower half, u <= 0.5.
double acklam_lower(double u) {
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double u_low = 0.02425;
  if (u < u_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = u - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double gaussian_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("gaussian_quantile: u must lie in (0, 1)");
  }
  if (u > 0.5) {
    return -gaussian_quantile(1.0 - u);
  }
  double x = acklam_lower(u);
  // One Halley step against the erfc-based CDF.
  const double err = gaussian_cdf(x) - u;
  const double t = err * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= t / (1.0 + 0.5 * x * t);
  return x;
}

SimulatedData simulate_dataset(const SimConfig& config, std::uint64_t replication) {
  config.validate();
  const auto n = static_cast<Eigen::Index>(config.n);
  const auto p = static_cast<Eigen::Index>(config.p);
  const Direction beta = config.true_beta();
  const double sigma = sigma_from_snr(config);
  const CounterStream stream(config.seed, replication);
  constexpr double kBelowOne = 1.0 - 0x1.0p-53;

  Matrix X(n, p);
  Vector Y(n);
  Vector factor(n);
  Matrix W(n, p);
  Vector eps_norms(n);
  Vector eps(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = static_cast<std::uint64_t>(i);
    const double u = stream.uniform(row, 0);
    Y[i] = pareto_quantile(u, config.gamma_y, config.a);
    factor[i] = std::min(1.0 - u, kBelowOne);
    const double signal = std::pow(Y[i], config.c);
    for (Eigen::Index j = 0; j < p; ++j) {
      const double draw = stream.uniform(row, static_cast<std::uint64_t>(j) + 1);
      const double base = clayton_conditional_inverse(draw, factor[i], config.theta);
      // complement = 1 - W, kept exact in the rotated branch where W = 1 - base.
      const double w = config.rotated ? 1.0 - base : base;
      const double complement =
          std::max(config.rotated ? base : 1.0 - base, std::numeric_limits<double>::min());
      W(i, j) = w;
      // Half-Gaussian margin: eps = sigma Psi^{-1}((1 + W) / 2).
      eps[j] = -sigma * gaussian_quantile(0.5 * complement);
    }
    eps_norms[i] = eps.norm();
    X.row(i) = (signal * beta.coords() + eps).transpose();
  }
  return SimulatedData{Dataset(std::move(X), std::move(Y)), std::move(factor), std::move(W),
                       std::move(eps_norms), sigma};
}

}  // namespace sepals::simulate
