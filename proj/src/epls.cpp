#include "sepals/epls.hpp"

#include "sepals/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace sepals::epls {

double empirical_survival(double y, const Vector& Y) {
  if (Y.size() == 0) {
    throw DomainError("empirical_survival: empty response");
  }
  return static_cast<double>((Y.array() >= y).count()) / static_cast<double>(Y.size());
}

double truncated_mean(double y, const Vector& Y) {
  if (Y.size() == 0) {
    throw DomainError("truncated_mean: empty response");
  }
  return (Y.array() >= y).select(Y.array(), 0.0).sum() / static_cast<double>(Y.size());
}

Vector phi_weights(double y, const Vector& Y) {
  const double survival = empirical_survival(y, Y);
  const double moment = truncated_mean(y, Y);
  const double inv_n = 1.0 / static_cast<double>(Y.size());
  Vector phi(Y.size());
  for (Eigen::Index i = 0; i < Y.size(); ++i) {
    phi[i] = Y[i] >= y ? inv_n * (survival * Y[i] - moment) : 0.0;
  }
  return phi;
}

Vector v_hat(double y, const Dataset& data) {
  return data.X().transpose() * phi_weights(y, data.Y());
}

double threshold_for_k(const Vector& Y, std::size_t k) {
  const auto n = static_cast<std::size_t>(Y.size());
  if (k < 1 || k > n) {
    throw BadThreshold("exceedance count k = " + std::to_string(k) +
                       " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<double> values(Y.data(), Y.data() + Y.size());
  auto kth = values.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(values.begin(), kth, values.end(), std::greater<>());
  return *kth;
}

FitResult fit_epls_at(const Dataset& data, double y, double theta_n) {
  if (!(theta_n > 0.0) || !std::isfinite(theta_n)) {
    throw BadThreshold("theta_n must be positive");
  }
  const Vector v = v_hat(y, data);
  const double norm = v.norm();
  if (!(norm >= Direction::kZeroNorm)) {
    throw DegenerateDirection("||v_hat|| = " + std::to_string(norm) +
                              " at threshold " + std::to_string(y));
  }
  const auto k_eff = static_cast<std::size_t>((data.Y().array() >= y).count());
  return FitResult{Direction::normalize(v), y, k_eff, norm, theta_n * norm};
}

FitResult fit_epls(const Dataset& data, std::size_t k, double theta_n) {
  return fit_epls_at(data, threshold_for_k(data.Y(), k), theta_n);
}

double ball_loglik(const Direction& beta, const Dataset& data, double y, double theta_n) {
  if (beta.size() != data.p()) {
    throw DomainError("ball_loglik: dimension mismatch");
  }
  return theta_n * beta.coords().dot(v_hat(y, data));
}

}  // namespace sepals::epls
