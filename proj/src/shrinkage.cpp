#include "sepals/shrinkage.hpp"

#include "sepals/error.hpp"

#include <cmath>
#include <string>

namespace sepals::shrinkage {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_dimension(const Direction& a, const epls::FitResult& fit) {
  if (a.size() != fit.beta.size()) {
    throw DomainError("prior/fit dimension mismatch");
  }
}

}  // namespace

void Prior::validate() const {
  if (!(theta_n > 0.0) || !std::isfinite(theta_n)) {
    throw DomainError("theta_n must be positive");
  }
  std::visit(overloaded{
                 [](const NoPrior&) {},
                 [](const ConjugatePrior& c) {
                   if (!(c.kappa0 >= 0.0)) throw DomainError("kappa0 must be non-negative");
                 },
                 [](const SparsePrior& s) {
                   if (!(s.lambda >= 0.0)) throw DomainError("lambda must be non-negative");
                 },
             },
             kind);
}

std::string_view family_name(PriorFamily family) {
  switch (family) {
    case PriorFamily::None: return "none";
    case PriorFamily::Conjugate: return "conjugate";
    case PriorFamily::Sparse: return "sparse";
  }
  return "none";
}

PriorFamily parse_family(std::string_view name) {
  if (name == "none") return PriorFamily::None;
  if (name == "conjugate") return PriorFamily::Conjugate;
  if (name == "sparse") return PriorFamily::Sparse;
  throw DomainError("unknown prior family '" + std::string(name) + "'");
}

double soft_threshold(double x, double lambda) {
  if (!(lambda >= 0.0)) {
    throw DomainError("soft_threshold: lambda must be non-negative");
  }
  const double magnitude = std::abs(x);
  if (!(magnitude > lambda)) {
    return 0.0;
  }
  return std::copysign(magnitude - lambda, x);
}

ConjugatePosterior conjugate_map(const epls::FitResult& fit, const Direction& mu0,
                                 double kappa0) {
  check_dimension(mu0, fit);
  if (!(kappa0 >= 0.0)) {
    throw DomainError("conjugate_map: kappa0 must be non-negative");
  }
  if (kappa0 == 0.0) {
    return {fit.beta, fit.K_n};
  }
  const Vector combined = fit.K_n * fit.beta.coords() + kappa0 * mu0.coords();
  const double norm = combined.norm();
  if (!(norm >= Direction::kZeroNorm)) {
    throw DegenerateDirection("conjugate posterior location cancels out");
  }
  return {Direction::normalize(combined), norm};
}

Direction sparse_map(const epls::FitResult& fit, double lambda) {
  if (!(lambda >= 0.0)) {
    throw DomainError("sparse_map: lambda must be non-negative");
  }
  if (lambda == 0.0) {
    return fit.beta;
  }
  Vector shrunk(fit.beta.size());
  for (Eigen::Index j = 0; j < shrunk.size(); ++j) {
    shrunk[j] = soft_threshold(fit.K_n * fit.beta[j], lambda);
  }
  if ((shrunk.array() == 0.0).all()) {
    throw OverShrunk("lambda = " + std::to_string(lambda) +
                     " removes every coordinate (K_n max|beta_j| = " +
                     std::to_string(fit.K_n * fit.beta.coords().cwiseAbs().maxCoeff()) + ")");
  }
  return Direction::normalize(shrunk);
}

Direction map_estimate(const epls::FitResult& fit, const Prior& prior) {
  return std::visit(overloaded{
                        [&](const NoPrior&) { return fit.beta; },
                        [&](const ConjugatePrior& c) {
                          return conjugate_map(fit, c.mu0, c.kappa0).direction;
                        },
                        [&](const SparsePrior& s) { return sparse_map(fit, s.lambda); },
                    },
                    prior.kind);
}

double log_posterior(const Direction& beta, const epls::FitResult& fit, const Prior& prior) {
  check_dimension(beta, fit);
  const double likelihood = fit.K_n * beta.dot(fit.beta);
  return likelihood +
         std::visit(overloaded{
                        [](const NoPrior&) { return 0.0; },
                        [&](const ConjugatePrior& c) { return c.kappa0 * c.mu0.dot(beta); },
                        [&](const SparsePrior& s) { return -s.lambda * beta.coords().lpNorm<1>(); },
                    },
                    prior.kind);
}

}  // namespace sepals::shrinkage
