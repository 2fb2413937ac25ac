#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ouhf/error.hpp"
#include "ouhf/estimate.hpp"
#include "ouhf/fpt.hpp"
#include "ouhf/signal.hpp"
#include "ouhf/sim.hpp"

namespace py = pybind11;
using namespace ouhf;

namespace {

TickSeries series(std::vector<double> times, std::vector<double> values) {
    return TickSeries(std::move(times), std::move(values));
}

py::dict fit_dict(const OuFit& f) {
    py::dict d;
    d["method"] = std::string(to_string(f.method));
    d["mu"] = f.params.ou.mu;
    d["tau"] = f.params.ou.tau;
    d["sigma2"] = f.params.ou.sigma2;
    d["omega2"] = f.params.omega2;
    d["loglik"] = f.loglik ? py::cast(*f.loglik) : py::none();
    d["n_used"] = f.n_used;
    d["converged"] = f.converged;
    d["omega2_clamped"] = f.diagnostics.omega2_clamped;
    return d;
}

py::dict opt_dict(const OptResult& r) {
    py::dict d;
    d["a"] = r.levels.a_t;
    d["b"] = r.levels.b_t;
    d["c"] = r.c_t;
    d["eta"] = r.eta_t;
    d["z_m"] = r.z_m_star;
    d["z_v"] = r.z_v_at_opt;
    d["binding"] = r.binding;
    d["trade"] = r.trade;
    return d;
}

}  // namespace

PYBIND11_MODULE(_ouhf, m) {
    m.doc() = "Noisy Ornstein-Uhlenbeck estimation and optimal mean-reversion trading signals";

    py::register_exception<Error>(m, "OuhfError", PyExc_ValueError);

    py::class_<OuParams>(m, "OuParams")
        .def(py::init<double, double, double>(), py::arg("mu"), py::arg("tau"), py::arg("sigma2"))
        .def_readwrite("mu", &OuParams::mu)
        .def_readwrite("tau", &OuParams::tau)
        .def_readwrite("sigma2", &OuParams::sigma2)
        .def("__repr__", [](const OuParams& p) {
            return "OuParams(mu=" + std::to_string(p.mu) + ", tau=" + std::to_string(p.tau) +
                   ", sigma2=" + std::to_string(p.sigma2) + ")";
        });

    m.def(
        "simulate",
        [](double mu, double tau, double sigma2, double omega2, std::size_t n, const std::string& grid,
           std::uint64_t seed, std::uint64_t path, std::optional<double> p0) {
            SimConfig cfg;
            cfg.params = {{mu, tau, sigma2}, omega2};
            if (grid == "equidistant") cfg.grid = equidistant_grid(n);
            else if (grid == "poisson") cfg.grid = sample_poisson_grid(n, seed, path);
            else throw Error(ErrorKind::InvalidArgument, "grid must be 'poisson' or 'equidistant'");
            cfg.seed = seed;
            cfg.path = path;
            if (p0) cfg.init = FixedStart{*p0};
            const auto s = simulate(cfg);
            auto vec = [](std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); };
            return py::make_tuple(vec(s.observed.times()), vec(s.observed.values()), vec(s.latent.values()));
        },
        py::arg("mu") = 1.0, py::arg("tau") = 10.0, py::arg("sigma2") = 1e-4, py::arg("omega2") = 1e-8,
        py::arg("n") = 23400, py::arg("grid") = "poisson", py::arg("seed") = 0, py::arg("path") = 0,
        py::arg("p0") = py::none(),
        "Simulate one day; returns (times, observed, latent).");

    m.def(
        "fit",
        [](const std::string& method, std::vector<double> times, std::vector<double> values) {
            return fit_dict(fit(parse_method(method), series(std::move(times), std::move(values))));
        },
        py::arg("method"), py::arg("times"), py::arg("values"),
        "Estimate (mu, tau, sigma2, omega2) with one of mom, mom-nr, ar, arma-nr, mle, mle-nr, rv.");

    m.def(
        "predict_mom_bias",
        [](double mu, double tau, double sigma2, double omega2, std::size_t n) {
            const auto b = predict_mom_bias({{mu, tau, sigma2}, omega2}, n);
            return py::make_tuple(b.tau_x, b.sigma2_x);
        },
        py::arg("mu"), py::arg("tau"), py::arg("sigma2"), py::arg("omega2"), py::arg("n"));

    m.def("passage_mean", &passage_mean, py::arg("start"), py::arg("level"));
    m.def("passage_variance", &passage_variance, py::arg("start"), py::arg("level"));
    m.def(
        "cycle_moments",
        [](double a, double b) {
            const auto c = cycle_moments({a, b});
            return py::make_tuple(c.mean, c.variance);
        },
        py::arg("a"), py::arg("b"), "Mean and variance of the a -> b -> a cycle of the dimensionless process.");

    m.def(
        "strategy_moments",
        [](double a, double b, double c) {
            const auto s = strategy_moments({a, b}, c);
            return py::make_tuple(s.z_m, s.z_v);
        },
        py::arg("a"), py::arg("b"), py::arg("c"));

    m.def(
        "optimize_signals", [](double c, double eta) { return opt_dict(optimize_signals(c, eta)); }, py::arg("c"),
        py::arg("eta") = std::numeric_limits<double>::infinity(), "Dimensionless optimal levels.");

    m.def(
        "optimal_policy",
        [](const OuParams& p, double c, double eta) {
            const auto o = optimal_policy(p, c, eta);
            py::dict d;
            d["a"] = o.policy.a;
            d["b"] = o.policy.b;
            d["c"] = o.policy.c;
            d["z_m"] = o.moments.z_m;
            d["z_v"] = o.moments.z_v;
            d["dimensionless"] = opt_dict(o.dimensionless);
            return d;
        },
        py::arg("params"), py::arg("c"), py::arg("eta") = std::numeric_limits<double>::infinity(),
        "Optimal levels and moments in original units.");
}
