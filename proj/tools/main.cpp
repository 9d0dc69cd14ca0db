// vmpredict command line: simulate | fit | predict | mc-table1 | asymp-efficiency
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "vmpredict/io.hpp"
#include "vmpredict/montecarlo.hpp"
#include "vmpredict/version.hpp"

namespace fs = std::filesystem;
using vmp::io::json;

namespace {

struct ModelArgs {
    std::string family = "ar1";
    std::vector<double> theta;
    double decay = 1.0;
    double threshold = 0.0;

    void attach(CLI::App* cmd, bool theta_required) {
        cmd->add_option("--family", family, "ar1 | ar | expar1 | setar211")
            ->capture_default_str();
        auto* t = cmd->add_option("--theta", theta, "model coefficients (comma separated)")
                      ->delimiter(',');
        if (theta_required) t->required();
        cmd->add_option("--gamma", decay, "expar1 decay constant")->capture_default_str();
        cmd->add_option("--xi", threshold, "setar211 threshold")->capture_default_str();
    }

    vmp::ModelSpec spec() const {
        vmp::ModelSpec s;
        s.family = vmp::family_from_name(family);
        s.theta = theta;
        s.decay = decay;
        s.threshold = threshold;
        if (family == "ar1" && theta.size() != 1)
            throw CLI::ValidationError("--theta", "ar1 expects exactly one coefficient");
        return s;
    }

    json to_json() const {
        return {{"family", family}, {"theta", theta}, {"gamma", decay}, {"xi", threshold}};
    }
};

// target syntax: cdf:t | cdf:t,u (lag-2 joint) | quantile:p | moment:g | absmoment:g
vmp::Target parse_target(const std::string& text, int lag) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--target", "expected kind:args, e.g. cdf:0");
    std::string kind = text.substr(0, colon);
    std::string args = text.substr(colon + 1);
    std::vector<double> vals;
    std::stringstream ss(args);
    std::string piece;
    while (std::getline(ss, piece, ',')) vals.push_back(std::stod(piece));
    if (kind == "cdf") {
        if (lag == 1 && vals.size() == 1) return vmp::Cdf1{vals[0]};
        if (lag == 2 && vals.size() == 1) return vmp::Cdf2Marginal{vals[0]};
        if (lag == 2 && vals.size() == 2) return vmp::Cdf2Joint{vals[0], vals[1]};
        throw CLI::ValidationError("--target", "cdf takes one value (or t,u for lag 2)");
    }
    if (kind == "quantile" && vals.size() == 1)
        return lag == 1 ? vmp::Target(vmp::Quantile1{vals[0]}) : vmp::Target(vmp::Quantile2{vals[0]});
    if (kind == "moment" && vals.size() == 1) return vmp::Moment1{vals[0], false};
    if (kind == "absmoment" && vals.size() == 1) return vmp::Moment1{vals[0], true};
    throw CLI::ValidationError("--target", "unknown target: " + text);
}

int cmd_simulate(const ModelArgs& model, const std::string& dist_name, int n, int burn_in,
                 std::uint64_t seed, const fs::path& out_dir) {
    vmp::ModelSpec spec = model.spec();
    vmp::InnovationDist dist = vmp::InnovationDist::from_name(dist_name);
    vmp::TimeSeries series = vmp::simulate_series(spec, dist, n, burn_in, seed);

    fs::create_directories(out_dir);
    fs::path csv = out_dir / "series.csv";
    fs::path side = out_dir / "series.json";
    vmp::io::write_series(csv, side, series, spec);

    vmp::io::Manifest manifest("simulate", {{"model", model.to_json()},
                                            {"dist", dist_name},
                                            {"n", n},
                                            {"burn_in", burn_in},
                                            {"seed", seed}});
    manifest.record_output(csv);
    manifest.record_output(side);
    manifest.write(out_dir / "manifest.json");
    std::cout << "wrote " << csv.string() << " (n = " << n << ", p = " << series.p << ")\n";
    return 0;
}

int cmd_fit(const fs::path& series_csv, std::string family_override, const fs::path& out_dir) {
    fs::path side = series_csv;
    side.replace_extension(".json");
    auto loaded = vmp::io::read_series(series_csv, side);
    std::string family =
        family_override.empty() ? vmp::family_name(loaded.spec.family) : family_override;

    vmp::ModelSpec fitted;
    if (family == "ar1" || (family == "ar" && loaded.series.p == 1))
        fitted = vmp::ModelSpec::ar1(vmp::fit_ar1_coefficient(loaded.series));
    else
        fitted = vmp::fit(loaded.series, vmp::family_from_name(family), loaded.spec);

    json report = vmp::io::model_to_json(fitted);
    report["n"] = loaded.series.n;
    std::cout << report.dump(2) << '\n';

    fs::create_directories(out_dir);
    fs::path out = out_dir / "fit.json";
    vmp::io::write_text(out, report.dump(2) + "\n");
    vmp::io::Manifest manifest("fit", {{"series", series_csv.string()}, {"family", family}});
    manifest.record_output(out);
    manifest.write(out_dir / "manifest.json");
    return 0;
}

int cmd_predict(const ModelArgs& model, const fs::path& series_csv, bool fit_from_series,
                std::vector<double> x, int lag, const std::string& target_text,
                const std::vector<std::string>& variant_names, const std::string& kernel_name_,
                double c, double beta, int riemann_n, const std::string& bw_scale,
                const fs::path& out_dir) {
    fs::path side = series_csv;
    side.replace_extension(".json");
    auto loaded = vmp::io::read_series(series_csv, side);

    vmp::ModelSpec spec;
    if (fit_from_series) {
        vmp::Family fam = model.theta.empty() ? loaded.spec.family
                                              : vmp::family_from_name(model.family);
        if (fam == vmp::Family::AR && loaded.series.p == 1)
            spec = vmp::ModelSpec::ar1(vmp::fit_ar1_coefficient(loaded.series));
        else
            spec = vmp::fit(loaded.series, fam, loaded.spec);
    } else if (!model.theta.empty()) {
        spec = model.spec();
    } else {
        spec = loaded.spec;  // sidecar parameters
    }

    vmp::PredictionTask task;
    task.lag = lag;
    task.x = x;
    task.target = parse_target(target_text, lag);

    vmp::KernelConfig kernel{vmp::kernel_from_name(kernel_name_), c, beta, riemann_n,
                             vmp::bandwidth_scale_from_name(bw_scale)};
    std::vector<vmp::Variant> variants;
    for (const auto& nm : variant_names) variants.push_back(vmp::variant_from_name(nm));

    vmp::ResidualSet res = vmp::residuals(loaded.series, spec);
    vmp::ELWeights w = vmp::solve_el_weights(res);
    vmp::PredictionResult pr = vmp::predict(res, w, spec, task, kernel, variants);

    json variants_json, raw_json;
    for (const auto& [v, val] : pr.values) variants_json[vmp::variant_name(v)] = val;
    for (const auto& [v, val] : pr.raw) raw_json[vmp::variant_name(v)] = val;
    json out = {{"task",
                 {{"lag", lag}, {"x", x}, {"target", target_text},
                  {"theta", spec.theta}, {"family", vmp::family_name(spec.family)}}},
                {"variants", variants_json},
                {"raw", raw_json},
                {"diagnostics",
                 {{"lambda", pr.lambda},
                  {"weights_solved", pr.weights_solved},
                  {"b_n", pr.bandwidth},
                  {"N", pr.riemann_n},
                  {"n", pr.n}}}};
    std::cout << out.dump(2) << '\n';

    fs::create_directories(out_dir);
    fs::path out_path = out_dir / "prediction.json";
    vmp::io::write_text(out_path, out.dump(2) + "\n");
    fs::path res_path = out_dir / "residuals.csv";
    vmp::io::write_residuals(res_path, res, w);
    vmp::io::Manifest manifest("predict", {{"series", series_csv.string()},
                                           {"model", model.to_json()},
                                           {"fit_from_series", fit_from_series},
                                           {"x", x},
                                           {"lag", lag},
                                           {"target", target_text},
                                           {"variants", variant_names},
                                           {"kernel", kernel_name_},
                                           {"c", c},
                                           {"beta", beta},
                                           {"N", riemann_n},
                                           {"bandwidth_scale", bw_scale}});
    manifest.record_output(out_path);
    manifest.record_output(res_path);
    manifest.write(out_dir / "manifest.json");
    return 0;
}

int cmd_table1(vmp::Table1Options opt, bool full, const fs::path& out_csv) {
    if (full) opt.reps = 20000;
    vmp::Table1Result result = vmp::table1(opt);
    std::cout << result.to_text();

    if (out_csv.has_parent_path()) fs::create_directories(out_csv.parent_path());
    vmp::io::write_text(out_csv, result.to_csv());
    json params = {{"reps", opt.reps}, {"seed", opt.seed},   {"dists", opt.dists},
                   {"ns", opt.ns},     {"cs", opt.cs},       {"theta", opt.theta},
                   {"x", opt.x},       {"u", opt.u},         {"beta", opt.beta},
                   {"N", opt.riemann_n}, {"burn_in", opt.burn_in},
                   {"bandwidth_scale", vmp::bandwidth_scale_name(opt.bandwidth_scale)}};
    vmp::io::Manifest manifest("mc-table1", params);
    manifest.record_output(out_csv);
    fs::path mpath = out_csv;
    mpath += ".manifest.json";
    manifest.write(mpath);
    std::cout << "wrote " << out_csv.string() << '\n';
    return 0;
}

int cmd_efficiency(double u, const std::string& dist_name, int theta_steps, int x_steps,
                   double theta_min, double theta_max, double x_min, double x_max,
                   const fs::path& out_dir) {
    vmp::InnovationDist dist = vmp::InnovationDist::from_name(dist_name);
    auto thetas = vmp::linspace(theta_min, theta_max, theta_steps);
    auto xs = vmp::linspace(x_min, x_max, x_steps);
    vmp::EfficiencySurface surface = vmp::efficiency_surface(u, dist, thetas, xs);

    fs::create_directories(out_dir);
    fs::path out = out_dir / "surface.csv";
    vmp::io::write_surface(out, surface);
    std::cout << "ratio min " << surface.min_ratio() << ", max " << surface.max_ratio()
              << "; tau_w_sq min " << surface.min_tau_w_sq() << ", max "
              << surface.max_tau_w_sq() << '\n';

    vmp::io::Manifest manifest("asymp-efficiency",
                               {{"u", u},
                                {"dist", dist_name},
                                {"theta", {{"min", theta_min}, {"max", theta_max}, {"steps", theta_steps}}},
                                {"x", {{"min", x_min}, {"max", x_max}, {"steps", x_steps}}}});
    manifest.record_output(out);
    manifest.write(out_dir / "manifest.json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Residual-based weighted and smoothed von Mises prediction for autoregressions"};
    app.set_version_flag("--version", VMPREDICT_VERSION);
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate a stationary series");
    ModelArgs sim_model;
    sim_model.attach(sim, true);
    std::string sim_dist = "normal";
    int sim_n = 1000, sim_burn = 500;
    std::uint64_t sim_seed = 1;
    fs::path sim_out = ".";
    sim->add_option("--dist", sim_dist, "normal | logistic | t5")->capture_default_str();
    sim->add_option("--n", sim_n, "sample size")->capture_default_str();
    sim->add_option("--burn-in", sim_burn)->capture_default_str();
    sim->add_option("--seed", sim_seed)->capture_default_str();
    sim->add_option("--out", sim_out, "output directory")->capture_default_str();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "least-squares fit from a series file");
    fs::path fit_series;
    std::string fit_family;
    fs::path fit_out = ".";
    fit_cmd->add_option("--series", fit_series, "series.csv (sidecar .json expected)")->required();
    fit_cmd->add_option("--family", fit_family, "override the sidecar family");
    fit_cmd->add_option("--out", fit_out, "output directory")->capture_default_str();

    // predict
    auto* pred = app.add_subcommand("predict", "conditional expectation / CDF / quantile");
    ModelArgs pred_model;
    pred_model.attach(pred, false);
    fs::path pred_series;
    bool pred_fit = false;
    std::vector<double> pred_x;
    int pred_lag = 1;
    std::string pred_target = "cdf:0";
    std::vector<std::string> pred_variants = {"U", "W", "S", "SW"};
    std::string pred_kernel = "triweight";
    double pred_c = 2.0, pred_beta = 0.25;
    int pred_N = 100;
    std::string pred_bw_scale = "support";
    fs::path pred_out = ".";
    pred->add_option("--series", pred_series, "series.csv")->required();
    pred->add_flag("--fit-from-series", pred_fit, "estimate theta from the series");
    pred->add_option("--x", pred_x, "conditioning vector")->delimiter(',')->required();
    pred->add_option("--lag", pred_lag, "1 or 2")->capture_default_str();
    pred->add_option("--target", pred_target, "cdf:t | cdf:t,u | quantile:p | moment:g | absmoment:g")
        ->capture_default_str();
    pred->add_option("--variant", pred_variants, "subset of U,W,S,SW")->delimiter(',')
        ->capture_default_str();
    pred->add_option("--kernel", pred_kernel, "triweight | biweight | epanechnikov")
        ->capture_default_str();
    pred->add_option("--c", pred_c, "bandwidth constant")->capture_default_str();
    pred->add_option("--beta", pred_beta, "bandwidth exponent")->capture_default_str();
    pred->add_option("--N", pred_N, "midpoint cells on [-1,1]")->capture_default_str();
    pred->add_option("--bandwidth-scale", pred_bw_scale,
                     "read c in half-support or kernel-sd units: support | sd")
        ->capture_default_str();
    pred->add_option("--out", pred_out, "output directory")->capture_default_str();

    // mc-table1
    auto* mc = app.add_subcommand("mc-table1", "simulated MSE grid for the lag-2 CDF estimators");
    vmp::Table1Options t1;
    bool mc_full = false;
    fs::path mc_out = "table1.csv";
    mc->add_option("--reps", t1.reps)->capture_default_str();
    mc->add_option("--seed", t1.seed)->capture_default_str();
    mc->add_option("--dists", t1.dists, "subset of normal,logistic,t5")->delimiter(',')
        ->capture_default_str();
    mc->add_option("--ns", t1.ns, "sample sizes")->delimiter(',')->capture_default_str();
    mc->add_option("--cs", t1.cs, "bandwidth constants")->delimiter(',')->capture_default_str();
    mc->add_option("--theta", t1.theta)->capture_default_str();
    mc->add_option("--x", t1.x)->capture_default_str();
    mc->add_option("--u", t1.u)->capture_default_str();
    mc->add_option("--threads", t1.threads, "0 = auto")->capture_default_str();
    std::string mc_bw_scale = "sd";
    mc->add_option("--bandwidth-scale", mc_bw_scale,
                   "read the c columns in kernel-sd units (the published design) or half-support "
                   "units: sd | support")
        ->capture_default_str();
    mc->add_flag("--full", mc_full, "run the full 20,000 repetitions");
    mc->add_option("--out", mc_out, "output CSV path")->capture_default_str();

    // asymp-efficiency
    auto* eff = app.add_subcommand("asymp-efficiency", "asymptotic variance/efficiency surface");
    double eff_u = 0.0;
    std::string eff_dist = "normal";
    int eff_tsteps = 19, eff_xsteps = 21;
    double eff_tmin = 0.05, eff_tmax = 0.95, eff_xmin = 0.0, eff_xmax = 2.0;
    fs::path eff_out = ".";
    eff->add_option("--u", eff_u)->capture_default_str();
    eff->add_option("--dist", eff_dist)->capture_default_str();
    eff->add_option("--theta-steps", eff_tsteps)->capture_default_str();
    eff->add_option("--x-steps", eff_xsteps)->capture_default_str();
    eff->add_option("--theta-min", eff_tmin)->capture_default_str();
    eff->add_option("--theta-max", eff_tmax)->capture_default_str();
    eff->add_option("--x-min", eff_xmin)->capture_default_str();
    eff->add_option("--x-max", eff_xmax)->capture_default_str();
    eff->add_option("--out", eff_out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_model, sim_dist, sim_n, sim_burn, sim_seed, sim_out);
        if (fit_cmd->parsed()) return cmd_fit(fit_series, fit_family, fit_out);
        if (pred->parsed())
            return cmd_predict(pred_model, pred_series, pred_fit, pred_x, pred_lag, pred_target,
                               pred_variants, pred_kernel, pred_c, pred_beta, pred_N,
                               pred_bw_scale, pred_out);
        if (mc->parsed()) {
            t1.bandwidth_scale = vmp::bandwidth_scale_from_name(mc_bw_scale);
            return cmd_table1(t1, mc_full, mc_out);
        }
        if (eff->parsed())
            return cmd_efficiency(eff_u, eff_dist, eff_tsteps, eff_xsteps, eff_tmin, eff_tmax,
                                  eff_xmin, eff_xmax, eff_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
