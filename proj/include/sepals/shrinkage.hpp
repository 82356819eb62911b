#pragma once

#include "sepals/epls.hpp"
#include "sepals/types.hpp"

#include <string_view>
#include <variant>

namespace sepals::shrinkage {

struct NoPrior {};

/// vMF_S(mu0, kappa0) prior on the direction.
struct ConjugatePrior {
  Direction mu0;
  double kappa0;
};

/// Laplace(lambda) prior restricted to the sphere.
struct SparsePrior {
  double lambda;
};

struct Prior {
  std::variant<NoPrior, ConjugatePrior, SparsePrior> kind = NoPrior{};
  double theta_n = 1.0;

  /// Throws DomainError on negative kappa0/lambda or non-positive theta_n.
  void validate() const;
};

enum class PriorFamily { None, Conjugate, Sparse };

std::string_view family_name(PriorFamily family);
/// Parses "none", "conjugate" or "sparse"; throws DomainError otherwise.
PriorFamily parse_family(std::string_view name);

/// sign(x) (|x| - lambda) 1{|x| > lambda}.
double soft_threshold(double x, double lambda);

struct ConjugatePosterior {
  Direction direction;
  double kappa;
};

/// Posterior vMF_S(mu_n, kappa_n) under the conjugate prior; mu_n is the MAP.
/// Throws DegenerateDirection when K_n beta_ml + kappa0 mu0 vanishes.
ConjugatePosterior conjugate_map(const epls::FitResult& fit, const Direction& mu0,
                                 double kappa0);

/// MAP under the sparse Laplace prior: soft-threshold K_n beta_ml
/// componentwise, then renormalize. Throws OverShrunk when nothing survives.
Direction sparse_map(const epls::FitResult& fit, double lambda);

/// Posterior mode for any prior (the EPLS direction itself for NoPrior).
Direction map_estimate(const epls::FitResult& fit, const Prior& prior);

/// Unnormalized log posterior K_n <beta, beta_ml> + log pi(beta), with the
/// beta-free constants dropped.
double log_posterior(const Direction& beta, const epls::FitResult& fit, const Prior& prior);

}  // namespace sepals::shrinkage
