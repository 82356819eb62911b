#pragma once

#include "sepals/types.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>

namespace sepals::simulate {

/// Counter-based uniform stream: the value at (replication, row, column) is
/// a pure function of (seed, replication, row, column). Each coordinate is
/// folded in with a SplitMix64 finalizer, and the top 53 bits map to the
/// open interval (0, 1).
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed, std::uint64_t replication = 0);

  double uniform(std::uint64_t row, std::uint64_t column) const;

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
};

/// Generative setup of model X = g(Y) beta + eps with Pareto Y, g(t) = t^c and
/// one-factor (rotated) Clayton dependence between Y and half-Gaussian eps.
struct SimConfig {
  std::size_t n = 500;
  std::size_t p = 30;
  double gamma_y = 0.2;
  double a = 2.0;
  double c = 1.0;
  double theta = 0.5;
  bool rotated = false;
  double snr = 10.0;
  /// Defaults to (1, 1, 0, ..., 0)/sqrt(2) when unset.
  std::optional<Direction> beta;
  std::uint64_t seed = 42;

  /// Throws DomainError if any invariant is violated.
  void validate() const;
  Direction true_beta() const;
};

/// y with Fbar(y) = u, i.e. a u^{-gamma_y}. Throws DomainError unless 0 < u <= 1.
double pareto_quantile(double u, double gamma_y, double a);

/// sigma = g(Fbar^{-1}(1/n)) / snr = (a n^{gamma_y})^c / snr.
double sigma_from_snr(const SimConfig& config);

/// Solves dC_theta/dv(u, v) = p_unif for u. theta = 0 is the independence
/// copula (returns p_unif).
double clayton_conditional_inverse(double p_unif, double v, double theta);

/// Kendall's tau theta/(theta + 2), negated for the rotated copula.
double kendall_tau_clayton(double theta, bool rotated);

/// Standard normal CDF.
double gaussian_cdf(double x);

/// Standard normal quantile, |error| <= 1e-9. Throws DomainError outside (0, 1).
double gaussian_quantile(double u);

struct SimulatedData {
  Dataset data;
  /// Copula factor v_i = F(Y_i).
  Vector factor;
  /// Copula-scale error margins W_ij in (0, 1), n x p.
  Matrix copula_uniforms;
  /// ||eps_i||_2.
  Vector eps_norms;
  double sigma;
};

/// Draws one dataset from the substream (config.seed, replication).
SimulatedData simulate_dataset(const SimConfig& config, std::uint64_t replication = 0);

}  // namespace sepals::simulate
