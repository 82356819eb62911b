#include "sepals/epls.hpp"
#include "sepals/error.hpp"
#include "sepals/metrics.hpp"
#include "sepals/shrinkage.hpp"
#include "sepals/simulate.hpp"
#include "sepals/tail.hpp"
#include "sepals/vmf.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sepals;

namespace {

Direction as_direction(const Vector& v) { return Direction::normalize(v); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Extreme partial least squares with shrinkage priors";
  m.attr("__version__") = SEPALS_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DegenerateDirection>(m, "DegenerateDirection", base.ptr());
  py::register_exception<BadThreshold>(m, "BadThreshold", base.ptr());
  py::register_exception<OverShrunk>(m, "OverShrunk", base.ptr());
  py::register_exception<NonPositiveTail>(m, "NonPositiveTail", base.ptr());
  py::register_exception<DegenerateSubsample>(m, "DegenerateSubsample", base.ptr());

  // von Mises-Fisher
  m.def("bessel_i", &vmf::bessel_i, py::arg("q"), py::arg("kappa"));
  m.def("log_bessel_i", &vmf::log_bessel_i, py::arg("q"), py::arg("kappa"));
  m.def("log_c_p", &vmf::log_c_p, py::arg("p"), py::arg("kappa"));
  m.def(
      "logpdf_sphere",
      [](const Vector& x, const Vector& mu, double kappa) { return vmf::logpdf_sphere(x, as_direction(mu), kappa); },
      py::arg("x"), py::arg("mu"), py::arg("kappa"));
  m.def(
      "logpdf_ball",
      [](const Vector& x, const Vector& mu, double r, double kappa) {
        return vmf::logpdf_ball(x, vmf::BallVmfParams{as_direction(mu), r, kappa});
      },
      py::arg("x"), py::arg("mu"), py::arg("r"), py::arg("kappa"));

  // EPLS
  py::class_<epls::FitResult>(m, "FitResult")
      .def_property_readonly("beta", [](const epls::FitResult& f) { return f.beta.coords(); })
      .def_readonly("y_threshold", &epls::FitResult::y_threshold)
      .def_readonly("k", &epls::FitResult::k)
      .def_readonly("v_norm", &epls::FitResult::v_norm)
      .def_readonly("K_n", &epls::FitResult::K_n)
      .def("__repr__", [](const epls::FitResult& f) {
        return "FitResult(k=" + std::to_string(f.k) + ", y_threshold=" + std::to_string(f.y_threshold) +
               ", K_n=" + std::to_string(f.K_n) + ")";
      });
  m.def(
      "v_hat", [](const Matrix& X, const Vector& Y, double y) { return epls::v_hat(y, Dataset(X, Y)); },
      py::arg("X"), py::arg("Y"), py::arg("y"));
  m.def(
      "fit_epls",
      [](const Matrix& X, const Vector& Y, std::size_t k, double theta_n) {
        return epls::fit_epls(Dataset(X, Y), k, theta_n);
      },
      py::arg("X"), py::arg("Y"), py::arg("k"), py::arg("theta_n") = 1.0);
  m.def(
      "fit_epls_at",
      [](const Matrix& X, const Vector& Y, double y, double theta_n) {
        return epls::fit_epls_at(Dataset(X, Y), y, theta_n);
      },
      py::arg("X"), py::arg("Y"), py::arg("y"), py::arg("theta_n") = 1.0);

  // Shrinkage
  m.def("soft_threshold", &shrinkage::soft_threshold, py::arg("x"), py::arg("lam"));
  m.def(
      "conjugate_map",
      [](const epls::FitResult& fit, const Vector& mu0, double kappa0) {
        const auto post = shrinkage::conjugate_map(fit, as_direction(mu0), kappa0);
        return py::make_tuple(post.direction.coords(), post.kappa);
      },
      py::arg("fit"), py::arg("mu0"), py::arg("kappa0"),
      "Posterior mode and concentration under the conjugate prior.");
  m.def(
      "sparse_map", [](const epls::FitResult& fit, double lam) { return shrinkage::sparse_map(fit, lam).coords(); },
      py::arg("fit"), py::arg("lam"));

  // Tail diagnostics
  m.def("hill", &tail::hill, py::arg("Y"), py::arg("k"));
  m.def(
      "hill_curve",
      [](const Vector& Y, std::size_t k_max) {
        const auto c = tail::hill_curve(Y, k_max);
        py::dict d;
        d["k"] = c.k_values;
        d["gamma_hat"] = c.gamma_hat;
        d["ci_low"] = c.ci_low;
        d["ci_high"] = c.ci_high;
        return d;
      },
      py::arg("Y"), py::arg("k_max"));
  m.def(
      "qq_data",
      [](const Vector& Y, std::size_t k) {
        const auto q = tail::qq_data(Y, k);
        std::vector<double> x, y;
        for (const auto& pt : q.points) {
          x.push_back(pt.x);
          y.push_back(pt.y);
        }
        py::dict d;
        d["x"] = x;
        d["y"] = y;
        d["slope"] = q.slope;
        return d;
      },
      py::arg("Y"), py::arg("k"));

  // Simulation
  py::class_<simulate::SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("n", &simulate::SimConfig::n)
      .def_readwrite("p", &simulate::SimConfig::p)
      .def_readwrite("gamma_y", &simulate::SimConfig::gamma_y)
      .def_readwrite("a", &simulate::SimConfig::a)
      .def_readwrite("c", &simulate::SimConfig::c)
      .def_readwrite("theta", &simulate::SimConfig::theta)
      .def_readwrite("rotated", &simulate::SimConfig::rotated)
      .def_readwrite("snr", &simulate::SimConfig::snr)
      .def_readwrite("seed", &simulate::SimConfig::seed)
      .def_property(
          "beta", [](const simulate::SimConfig& c) { return c.true_beta().coords(); },
          [](simulate::SimConfig& c, const std::optional<Vector>& b) {
            c.beta = b ? std::optional(as_direction(*b)) : std::nullopt;
          })
      .def("validate", &simulate::SimConfig::validate);
  m.def("kendall_tau_clayton", &simulate::kendall_tau_clayton, py::arg("theta"), py::arg("rotated") = false);
  m.def(
      "simulate_dataset",
      [](const simulate::SimConfig& config, std::uint64_t replication) {
        const auto sim = simulate::simulate_dataset(config, replication);
        py::dict d;
        d["X"] = sim.data.X();
        d["Y"] = sim.data.Y();
        d["factor"] = sim.factor;
        d["copula_uniforms"] = sim.copula_uniforms;
        d["eps_norms"] = sim.eps_norms;
        d["sigma"] = sim.sigma;
        return d;
      },
      py::arg("config"), py::arg("replication") = 0);

  // Metrics
  m.def(
      "similarity_r",
      [](const std::vector<Vector>& estimates, const Vector& beta) {
        std::vector<Direction> dirs;
        for (const auto& e : estimates) dirs.push_back(as_direction(e));
        return metrics::similarity_r(dirs, as_direction(beta));
      },
      py::arg("estimates"), py::arg("beta"));
  m.def(
      "tail_corr_y",
      [](const Matrix& X, const Vector& Y, const Vector& beta, double y) {
        return metrics::tail_corr_y(Dataset(X, Y), as_direction(beta), y);
      },
      py::arg("X"), py::arg("Y"), py::arg("beta"), py::arg("y"));
  m.def(
      "tail_corr_x",
      [](const Matrix& X, const Vector& Y, const Vector& beta, double y, Eigen::Index j) {
        return metrics::tail_corr_x(Dataset(X, Y), as_direction(beta), y, j);
      },
      py::arg("X"), py::arg("Y"), py::arg("beta"), py::arg("y"), py::arg("j"));
  m.def(
      "run_sweep",
      [](const simulate::SimConfig& config, const std::string& family, std::vector<double> hyper_grid,
         std::vector<std::size_t> k_grid, std::size_t replications, const std::optional<Vector>& mu0,
         double theta_n, std::size_t jobs) {
        metrics::SweepSpec spec;
        spec.family = shrinkage::parse_family(family);
        spec.hyper_grid = std::move(hyper_grid);
        spec.k_grid = std::move(k_grid);
        spec.replications = replications;
        if (mu0) spec.mu0 = as_direction(*mu0);
        spec.theta_n = theta_n;
        spec.jobs = jobs;
        metrics::SweepResult res;
        {
          py::gil_scoped_release release;
          res = metrics::run_sweep(config, spec);
        }
        py::dict d;
        d["hyper_grid"] = res.hyper_grid;
        d["k_grid"] = res.k_grid;
        d["mean_r"] = res.mean_R;
        d["q05"] = res.q05_R;
        d["q95"] = res.q95_R;
        d["failures"] = Eigen::MatrixXi(res.failures);
        d["flagged_cells"] = res.flagged_cells();
        return d;
      },
      py::arg("config"), py::arg("family"), py::arg("hyper_grid"), py::arg("k_grid"),
      py::arg("replications") = 100, py::arg("mu0") = std::nullopt, py::arg("theta_n") = 1.0,
      py::arg("jobs") = 1);
}
