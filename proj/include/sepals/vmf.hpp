#pragma once

#include "sepals/types.hpp"

namespace sepals::vmf {

/// Modified Bessel function of the first kind I_q(kappa), q >= 0, from its
/// power series. Throws DomainError for negative arguments.
double bessel_i(double q, double kappa);

/// log I_q(kappa), evaluated in log space so it stays finite for large kappa.
/// Returns -infinity when I_q(kappa) = 0 (kappa = 0, q > 0).
double log_bessel_i(double q, double kappa);

/// Log of the normalizing constant c_p(kappa) of the vMF law on S^{p-1}.
/// At kappa = 0 this is the log inverse surface area of the sphere,
/// log(Gamma(p/2) / (2 pi^{p/2})), which is also the kappa -> 0 limit.
double log_c_p(int p, double kappa);

/// log f(x | mu, kappa) of vMF on the unit sphere; -infinity off the sphere
/// (| ||x|| - 1 | > 1e-9).
double logpdf_sphere(const Vector& x, const Direction& mu, double kappa);

struct BallVmfParams {
  Direction mu;
  double r;
  double kappa;

  /// Throws DomainError unless r > 0 and kappa >= 0.
  void validate() const;
};

/// log f(x | mu, r, kappa) of the vMF law on the p-ball of radius r;
/// -infinity outside the ball.
double logpdf_ball(const Vector& x, const BallVmfParams& params);

}  // namespace sepals::vmf
