#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vmpredict/asymptotics.hpp"
#include "vmpredict/montecarlo.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace vmp;

namespace {

PredictionTask make_task(int lag, std::vector<double> x, const std::string& kind,
                         std::vector<double> args, py::object custom) {
    PredictionTask task;
    task.lag = lag;
    task.x = std::move(x);
    if (!custom.is_none()) {
        if (lag == 1)
            task.target = Custom1{custom.cast<std::function<double(double)>>()};
        else
            task.target = Custom2{custom.cast<std::function<double(double, double)>>()};
        return task;
    }
    if (kind == "cdf") {
        if (lag == 1)
            task.target = Cdf1{args.at(0)};
        else if (args.size() == 2)
            task.target = Cdf2Joint{args.at(0), args.at(1)};
        else
            task.target = Cdf2Marginal{args.at(0)};
    } else if (kind == "quantile") {
        if (lag == 1)
            task.target = Quantile1{args.at(0)};
        else
            task.target = Quantile2{args.at(0)};
    } else if (kind == "moment") {
        task.target = Moment1{args.at(0), false};
    } else if (kind == "absmoment") {
        task.target = Moment1{args.at(0), true};
    } else {
        throw std::invalid_argument("unknown target kind: " + kind);
    }
    return task;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Residual-based weighted and smoothed von Mises prediction for autoregressions";

    py::class_<ModelSpec>(m, "ModelSpec")
        .def_static("ar1", &ModelSpec::ar1, py::arg("theta"))
        .def_static("ar", &ModelSpec::ar, py::arg("theta"))
        .def_static("expar1", &ModelSpec::expar1, py::arg("theta1"), py::arg("theta2"),
                    py::arg("decay"))
        .def_static("setar211", &ModelSpec::setar211, py::arg("theta1"), py::arg("theta2"),
                    py::arg("threshold"))
        .def_readwrite("theta", &ModelSpec::theta)
        .def_readwrite("decay", &ModelSpec::decay)
        .def_readwrite("threshold", &ModelSpec::threshold)
        .def_property_readonly("family", [](const ModelSpec& s) { return family_name(s.family); })
        .def_property_readonly("order", &ModelSpec::order)
        .def("__repr__", [](const ModelSpec& s) {
            std::string r = std::string("ModelSpec(") + family_name(s.family) + ", theta=[";
            for (std::size_t i = 0; i < s.theta.size(); ++i)
                r += (i ? ", " : "") + std::to_string(s.theta[i]);
            return r + "])";
        });

    py::class_<InnovationDist>(m, "InnovationDist")
        .def(py::init(&InnovationDist::from_name), py::arg("name"))
        .def_property_readonly("name", &InnovationDist::name)
        .def("density", &InnovationDist::density)
        .def("density_deriv", &InnovationDist::density_deriv)
        .def("cdf", &InnovationDist::cdf)
        .def("score", &InnovationDist::score)
        .def("mean_below", &InnovationDist::mean_below)
        .def_property_readonly("variance", &InnovationDist::variance);

    py::class_<TimeSeries>(m, "TimeSeries")
        .def_readonly("values", &TimeSeries::values)
        .def_readonly("n", &TimeSeries::n)
        .def_readonly("p", &TimeSeries::p);

    py::class_<ResidualSet>(m, "ResidualSet")
        .def_readonly("eps", &ResidualSet::eps)
        .def_readonly("theta_hat", &ResidualSet::theta_hat);

    py::class_<ELWeights>(m, "ELWeights")
        .def_readonly("lam", &ELWeights::lambda)
        .def_readonly("w", &ELWeights::w)
        .def_readonly("solved", &ELWeights::solved);

    py::class_<KernelConfig>(m, "KernelConfig")
        .def(py::init([](const std::string& kernel, double c, double beta, int N,
                         const std::string& scale) {
                 return KernelConfig{kernel_from_name(kernel), c, beta, N,
                                     bandwidth_scale_from_name(scale)};
             }),
             py::arg("kernel") = "triweight", py::arg("c") = 2.0, py::arg("beta") = 0.25,
             py::arg("N") = 100, py::arg("scale") = "support")
        .def("bandwidth", &KernelConfig::bandwidth);

    py::class_<AsymptoticReport>(m, "AsymptoticReport")
        .def_readonly("tau_sq", &AsymptoticReport::tau_sq)
        .def_readonly("tau_w_sq", &AsymptoticReport::tau_w_sq)
        .def_readonly("ratio", &AsymptoticReport::ratio)
        .def_readonly("var_h", &AsymptoticReport::var_h)
        .def_readonly("psi_term", &AsymptoticReport::psi_term)
        .def_readonly("c_term", &AsymptoticReport::c_term);

    m.def("regression_value",
          [](const ModelSpec& s, std::vector<double> x) {
              return regression_value(s, std::span<const double>(x));
          });
    m.def("regression_gradient",
          [](const ModelSpec& s, std::vector<double> x) {
              return regression_gradient(s, std::span<const double>(x));
          });
    m.def("simulate_series", &simulate_series, py::arg("spec"), py::arg("dist"), py::arg("n"),
          py::arg("burn_in") = 500, py::arg("seed") = 1);
    m.def("fit",
          [](const TimeSeries& series, const std::string& family, const ModelSpec& hints) {
              return fit(series, family_from_name(family), hints);
          },
          py::arg("series"), py::arg("family"), py::arg("hints") = ModelSpec{});
    m.def("fit_ar1_coefficient", &fit_ar1_coefficient);
    m.def("residuals", &residuals);
    m.def("solve_el_weights", &solve_el_weights);
    m.def("unit_weights", &unit_weights);
    m.def("kde", &kde, py::arg("residuals"), py::arg("weights"), py::arg("kernel"), py::arg("y"));
    m.def("smoothed_cdf", &smoothed_cdf, py::arg("residuals"), py::arg("weights"),
          py::arg("kernel"), py::arg("y"));

    m.def("predict",
          [](const ResidualSet& r, const ELWeights& w, const ModelSpec& spec, int lag,
             std::vector<double> x, const std::string& target, std::vector<double> args,
             py::object custom, const KernelConfig& k, std::vector<std::string> variants) {
              std::vector<Variant> vs;
              for (const auto& name : variants) vs.push_back(variant_from_name(name));
              PredictionTask task = make_task(lag, std::move(x), target, std::move(args), custom);
              PredictionResult res = predict(r, w, spec, task, k, vs);
              py::dict values, raw;
              for (const auto& [v, val] : res.values) values[variant_name(v)] = val;
              for (const auto& [v, val] : res.raw) raw[variant_name(v)] = val;
              return py::dict(py::arg("values") = values, py::arg("raw") = raw,
                              py::arg("lam") = res.lambda, py::arg("b_n") = res.bandwidth,
                              py::arg("N") = res.riemann_n, py::arg("n") = res.n,
                              py::arg("weights_solved") = res.weights_solved);
          },
          py::arg("residuals"), py::arg("weights"), py::arg("spec"), py::arg("lag"), py::arg("x"),
          py::arg("target") = "cdf", py::arg("args") = std::vector<double>{0.0},
          py::arg("custom") = py::none(), py::arg("kernel") = KernelConfig{},
          py::arg("variants") = std::vector<std::string>{"U", "W", "S", "SW"});

    m.def("conditional_quantile",
          [](const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
             std::vector<double> x, double prob, int lag, const KernelConfig& k, bool weighted) {
              return conditional_quantile(r, w, spec, x, prob, lag, k, weighted);
          },
          py::arg("residuals"), py::arg("weights"), py::arg("spec"), py::arg("x"), py::arg("prob"),
          py::arg("lag") = 1, py::arg("kernel") = KernelConfig{}, py::arg("weighted") = true);

    m.def("lag1_cdf_variances", &lag1_cdf_variances, py::arg("theta"), py::arg("x"), py::arg("t"),
          py::arg("dist"));
    m.def("lag2_cdf_variances", &lag2_cdf_variances, py::arg("theta"), py::arg("x"), py::arg("u"),
          py::arg("dist"));
    m.def("efficiency_surface",
          [](double u, const InnovationDist& dist, std::vector<double> thetas,
             std::vector<double> xs) {
              EfficiencySurface s = efficiency_surface(u, dist, thetas, xs);
              py::dict out;
              out["theta"] = s.theta_grid;
              out["x"] = s.x_grid;
              out["tau_sq"] = s.tau_sq;
              out["tau_w_sq"] = s.tau_w_sq;
              out["ratio"] = s.ratio;
              return out;
          },
          py::arg("u"), py::arg("dist"), py::arg("theta_grid"), py::arg("x_grid"));
    m.def("default_theta_grid", &default_theta_grid);
    m.def("default_x_grid", &default_x_grid);

    m.def("true_value",
          [](const ModelSpec& spec, const InnovationDist& dist, int lag, std::vector<double> x,
             const std::string& target, std::vector<double> args) {
              return true_value(spec, dist,
                                make_task(lag, std::move(x), target, std::move(args), py::none()));
          },
          py::arg("spec"), py::arg("dist"), py::arg("lag"), py::arg("x"), py::arg("target"),
          py::arg("args"));

    m.def("mc_run",
          [](const ModelSpec& spec, const InnovationDist& dist, int n, int reps,
             std::uint64_t seed, int lag, std::vector<double> x, const std::string& target,
             std::vector<double> args, std::vector<std::string> variants, std::vector<double> cs,
             double beta, int riemann_n, int burn_in, int threads,
             const std::string& bandwidth_scale) {
              MCConfig cfg;
              cfg.spec = spec;
              cfg.dist = dist;
              cfg.n = n;
              cfg.reps = reps;
              cfg.seed = seed;
              cfg.task = make_task(lag, std::move(x), target, std::move(args), py::none());
              cfg.variants.clear();
              for (const auto& name : variants) cfg.variants.push_back(variant_from_name(name));
              cfg.bandwidth_constants = std::move(cs);
              cfg.beta = beta;
              cfg.riemann_n = riemann_n;
              cfg.burn_in = burn_in;
              cfg.threads = threads;
              cfg.bandwidth_scale = bandwidth_scale_from_name(bandwidth_scale);
              MCResult res = run(cfg);
              py::list cells;
              for (const MCCell& cell : res.cells)
                  cells.append(py::dict(
                      py::arg("variant") = variant_name(cell.variant), py::arg("c") = cell.c,
                      py::arg("mse") = cell.mse, py::arg("se_mse") = cell.se_mse,
                      py::arg("mean_bias") = cell.mean_bias));
              return py::dict(py::arg("cells") = cells, py::arg("truth") = res.truth,
                              py::arg("reps_used") = res.reps_used,
                              py::arg("excluded_reps") = res.excluded_reps,
                              py::arg("fallback_weight_reps") = res.fallback_weight_reps);
          },
          py::arg("spec"), py::arg("dist"), py::arg("n"), py::arg("reps"), py::arg("seed"),
          py::arg("lag"), py::arg("x"), py::arg("target"), py::arg("args"),
          py::arg("variants") = std::vector<std::string>{"U", "W", "SW"},
          py::arg("cs") = std::vector<double>{2.0}, py::arg("beta") = 0.25,
          py::arg("riemann_n") = 100, py::arg("burn_in") = 500, py::arg("threads") = 0,
          py::arg("bandwidth_scale") = "support");

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
