#include "sepals/epls.hpp"
#include "sepals/error.hpp"
#include "sepals/simulate.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sepals;
using namespace sepals::simulate;

TEST_CASE("pareto_quantile") {
  CHECK(pareto_quantile(1.0, 0.2, 2.0) == 2.0);
  CHECK(pareto_quantile(1.0 / 500.0, 0.2, 2.0) == doctest::Approx(6.9314484315514639).epsilon(1e-14));
  CHECK(pareto_quantile(0.5, 0.2, 2.0) == doctest::Approx(2.2973967099940700).epsilon(1e-14));
  CHECK_THROWS_AS(pareto_quantile(0.0, 0.2, 2.0), DomainError);
  CHECK_THROWS_AS(pareto_quantile(1.5, 0.2, 2.0), DomainError);
}

TEST_CASE("sigma_from_snr") {
  SimConfig cfg;
  CHECK(sigma_from_snr(cfg) == doctest::Approx(0.69314484315514639).epsilon(1e-14));
  cfg.c = 0.5;
  CHECK(sigma_from_snr(cfg) == doctest::Approx(0.26327644086684748).epsilon(1e-14));
  cfg.snr = 1e12;
  CHECK(sigma_from_snr(cfg) < 1e-11);
}

TEST_CASE("SimConfig validation") {
  auto bad = [](auto mutate) {
    SimConfig cfg;
    mutate(cfg);
    return cfg;
  };
  CHECK_THROWS_AS(bad([](SimConfig& c) { c.gamma_y = 1.0; }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](SimConfig& c) { c.gamma_y = 0.0; }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](SimConfig& c) { c.c = 0.0; }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](SimConfig& c) { c.theta = -1.0; }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](SimConfig& c) { c.snr = 0.0; }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](SimConfig& c) { c.n = 1; }).validate(), DomainError);
  CHECK_THROWS_AS(bad([](SimConfig& c) { c.beta = Direction::basis(3, 0); }).validate(), DomainError);
  CHECK_NOTHROW(SimConfig{}.validate());
  CHECK(SimConfig{}.true_beta()[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("clayton_conditional_inverse inverts the conditional CDF") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> unif(0.001, 0.999);
  std::uniform_real_distribution<double> log_theta(std::log(0.05), std::log(20.0));
  for (int t = 0; t < 10000; ++t) {
    const double p = unif(rng), v = unif(rng), theta = std::exp(log_theta(rng));
    const double u = clayton_conditional_inverse(p, v, theta);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    CHECK(std::abs(std::exp(testing::log_clayton_h(u, v, theta)) - p) < 1e-10);
  }
}

TEST_CASE("clayton_conditional_inverse limits") {
  for (double p : {0.01, 0.2, 0.5, 0.8, 0.99}) {
    CHECK(clayton_conditional_inverse(p, 0.4, 0.0) == p);
    CHECK(std::abs(clayton_conditional_inverse(p, 0.4, 1e-8) - p) < 1e-4);
    CHECK(std::abs(clayton_conditional_inverse(p, 0.3, 1e3) - 0.3) < 0.01);
  }
  CHECK_THROWS_AS(clayton_conditional_inverse(0.0, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(clayton_conditional_inverse(0.5, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(clayton_conditional_inverse(0.5, 0.5, -1.0), DomainError);
}

TEST_CASE("kendall_tau_clayton") {
  CHECK(kendall_tau_clayton(8.0, false) == doctest::Approx(0.8));
  CHECK(kendall_tau_clayton(0.5, false) == doctest::Approx(0.2));
  CHECK(kendall_tau_clayton(0.0, false) == 0.0);
  CHECK(kendall_tau_clayton(8.0, true) == doctest::Approx(-0.8));
  CHECK(kendall_tau_clayton(0.5, true) == doctest::Approx(-0.2));
}

TEST_CASE("gaussian_quantile") {
  CHECK(gaussian_quantile(0.5) == 0.0);
  CHECK(std::abs(gaussian_quantile(0.975) - testing::normal_quantile_bisect(0.975)) < 1e-9);
  CHECK(std::abs(gaussian_quantile(0.975) - 1.959964) < 1e-6);
  CHECK_THROWS_AS(gaussian_quantile(0.0), DomainError);
  CHECK_THROWS_AS(gaussian_quantile(1.0), DomainError);
  for (int i = 1; i <= 10000; ++i) {
    const double u = i / 10001.0;
    const double x = gaussian_quantile(u);
    CHECK(std::abs(testing::normal_cdf(x) - u) < 1e-9);
    if (i % 97 == 0) CHECK(std::abs(x - testing::normal_quantile_bisect(u)) < 1e-9);
  }
  for (double u : {1e-12, 1e-8, 1e-4, 0.01, 0.03}) {
    CHECK(std::abs(gaussian_quantile(u) - testing::normal_quantile_bisect(u)) < 1e-9);
    CHECK(gaussian_quantile(1.0 - u) == doctest::Approx(-gaussian_quantile(u)).epsilon(1e-6));
  }
}

TEST_CASE("CounterStream is a pure function of its coordinates") {
  const CounterStream a(5, 2), b(5, 2), c(5, 3);
  double mean = 0.0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = a.uniform(i, i % 7);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(u == b.uniform(i, i % 7));
    mean += u;
  }
  CHECK(std::abs(mean / 10000.0 - 0.5) < 0.02);
  CHECK(a.uniform(0, 0) != c.uniform(0, 0));
  CHECK(a.uniform(0, 0) != a.uniform(0, 1));
}

TEST_CASE("simulate_dataset structure and reproducibility") {
  SimConfig cfg;
  cfg.n = 300;
  cfg.p = 6;
  cfg.seed = 99;
  const auto s1 = simulate_dataset(cfg, 4);
  const auto s2 = simulate_dataset(cfg, 4);
  CHECK(s1.data.X() == s2.data.X());
  CHECK(s1.data.Y() == s2.data.Y());
  CHECK(simulate_dataset(cfg, 5).data.Y() != s1.data.Y());
  cfg.seed = 100;
  CHECK(simulate_dataset(cfg, 4).data.Y() != s1.data.Y());
  cfg.seed = 99;

  const Direction beta = cfg.true_beta();
  for (Eigen::Index i = 0; i < s1.data.n(); ++i) {
    const double g = s1.data.Y()[i];
    const Vector eps = s1.data.X().row(i).transpose() - g * beta.coords();
    CHECK(eps.minCoeff() >= 0.0);
    CHECK(eps.norm() == doctest::Approx(s1.eps_norms[i]).epsilon(1e-12));
    CHECK(s1.data.X().row(i).norm() <= g + s1.eps_norms[i] + 1e-12);
    CHECK(s1.factor[i] == doctest::Approx(1.0 - std::pow(s1.data.Y()[i] / 2.0, -5.0)).epsilon(1e-9));
  }
}

TEST_CASE("noiseless data lie on the signal ray") {
  SimConfig cfg;
  cfg.snr = 1e12;
  cfg.seed = 8;
  const auto sim = simulate_dataset(cfg);
  const double ip = epls::fit_epls(sim.data, 50).beta.dot(cfg.true_beta());
  CHECK(ip * ip >= 1.0 - 1e-6);
}

TEST_CASE("copula dependence matches Kendall's tau") {
  for (double theta : {0.5, 8.0}) {
    for (bool rotated : {false, true}) {
      SimConfig cfg;
      cfg.n = 100000;
      cfg.p = 2;
      cfg.theta = theta;
      cfg.rotated = rotated;
      cfg.seed = 2718;
      const auto sim = simulate_dataset(cfg);
      const std::vector<double> v(sim.factor.data(), sim.factor.data() + sim.factor.size());
      for (Eigen::Index j = 0; j < 2; ++j) {
        const Vector col = sim.copula_uniforms.col(j);
        const std::vector<double> w(col.data(), col.data() + col.size());
        CHECK(std::abs(testing::kendall_tau(v, w) - kendall_tau_clayton(theta, rotated)) <= 0.02);
      }
    }
  }
}

TEST_CASE("margins: half-Gaussian errors and Pareto response") {
  SimConfig cfg;
  cfg.n = 10000;
  cfg.p = 3;
  cfg.theta = 8.0;
  cfg.seed = 1;
  const auto sim = simulate_dataset(cfg);
  const Direction beta = cfg.true_beta();
  for (Eigen::Index j = 0; j < 3; ++j) {
    std::vector<double> scaled;
    for (Eigen::Index i = 0; i < sim.data.n(); ++i) {
      scaled.push_back((sim.data.X()(i, j) - sim.data.Y()[i] * beta[j]) / sim.sigma);
    }
    const double d = testing::ks_distance(scaled, [](double x) {
      return x <= 0.0 ? 0.0 : 2.0 * testing::normal_cdf(x) - 1.0;
    });
    CHECK(d < testing::ks_critical_1pct(scaled.size()));
  }

  cfg.n = 100000;
  cfg.p = 2;
  const auto big = simulate_dataset(cfg);
  std::vector<double> ys(big.data.Y().data(), big.data.Y().data() + big.data.n());
  const double d = testing::ks_distance(ys, [](double y) {
    return y <= 2.0 ? 0.0 : 1.0 - std::pow(y / 2.0, -5.0);
  });
  CHECK(d < testing::ks_critical_1pct(ys.size()));
}
