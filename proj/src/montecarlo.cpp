#include "vmpredict/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vmpredict/quadrature.hpp"

namespace vmp {

namespace {

double quantile_of(const InnovationDist& dist, double p) {
    double lo = -1.0, hi = 1.0;
    while (dist.cdf(lo) >= p) lo *= 2.0;
    while (dist.cdf(hi) < p) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        (dist.cdf(mid) >= p ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> second_step_lag(std::span<const double> x, double v1) {
    std::vector<double> out(x.begin() + 1, x.end());
    out.push_back(v1);
    return out;
}

// G_x(u) = integral F(u - m(x_{-1}, y + m(x))) f(y) dy, optionally truncated
// at y <= t - m(x) for the joint CDF.
double lag2_cdf_truth(const ModelSpec& spec, const InnovationDist& dist,
                      std::span<const double> x, double u, double t, bool joint) {
    double shift = regression_value(spec, x);
    double R = dist.quad_cutoff();
    double upper = joint ? std::min(t - shift, R) : R;
    auto integrand = [&](double y) {
        double m = regression_value(spec, second_step_lag(x, y + shift));
        return dist.cdf(u - m) * dist.density(y);
    };
    if (upper <= -R) return 0.0;
    std::vector<double> breaks = {-R, -8.0, -2.0, 0.0, 2.0, 8.0, upper};
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.erase(
        std::remove_if(breaks.begin(), breaks.end(), [&](double v) { return v < -R || v > upper; }),
        breaks.end());
    double val = quad::integrate(integrand, breaks, 1e-11);
    // tails: F(.) is ~constant past the cutoff
    double m_lo = regression_value(spec, second_step_lag(x, -R + shift));
    val += dist.cdf(u - m_lo) * dist.cdf(-R);
    if (!joint || upper >= R) {
        double m_hi = regression_value(spec, second_step_lag(x, R + shift));
        val += dist.cdf(u - m_hi) * (1.0 - dist.cdf(R));
    }
    return val;
}

}  // namespace

double true_value(const ModelSpec& spec, const InnovationDist& dist, const PredictionTask& task) {
    std::span<const double> x(task.x);
    if (static_cast<int>(task.x.size()) != spec.order())
        throw std::invalid_argument("true_value: conditioning vector length must equal the order");

    if (const auto* c1 = std::get_if<Cdf1>(&task.target))
        return dist.cdf(c1->t - regression_value(spec, x));

    if (const auto* cm = std::get_if<Cdf2Marginal>(&task.target)) {
        if (spec.family == Family::AR && spec.theta.size() == 1 &&
            dist.kind() == InnovationKind::StdNormal) {
            // eps_2 + theta eps_1 is normal with variance 1 + theta^2
            double theta = spec.theta[0];
            InnovationDist normal(InnovationKind::StdNormal);
            return normal.cdf((cm->u - theta * theta * x[0]) / std::sqrt(1.0 + theta * theta));
        }
        return lag2_cdf_truth(spec, dist, x, cm->u, 0.0, false);
    }

    if (const auto* cj = std::get_if<Cdf2Joint>(&task.target))
        return lag2_cdf_truth(spec, dist, x, cj->u, cj->t, true);

    if (const auto* q1 = std::get_if<Quantile1>(&task.target))
        return quantile_of(dist, q1->prob) + regression_value(spec, x);

    if (const auto* q2 = std::get_if<Quantile2>(&task.target)) {
        double lo = -2.0, hi = 2.0;
        auto G = [&](double u) { return lag2_cdf_truth(spec, dist, x, u, 0.0, false); };
        while (G(lo) >= q2->prob) lo *= 2.0;
        while (G(hi) < q2->prob) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-11; ++it) {
            double mid = 0.5 * (lo + hi);
            (G(mid) >= q2->prob ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    }

    if (const auto* m1 = std::get_if<Moment1>(&task.target)) {
        double g = m1->exponent;
        double shift = regression_value(spec, x);
        double R = dist.quad_cutoff();
        auto q = [&](double y) {
            double v = y + shift;
            return m1->absolute ? std::pow(std::abs(v), g) : std::pow(v, g);
        };
        return quad::integrate([&](double y) { return q(y) * dist.density(y); },
                               {-R, -8.0, 0.0, 8.0, R}, 1e-10);
    }

    throw std::invalid_argument("true_value: no analytic truth for custom targets");
}

namespace {

struct RepOutcome {
    std::vector<double> estimates;  // one per cell, clamped for CDF targets
    bool degenerate = false;
    bool fallback = false;
};

struct CellKey {
    Variant variant;
    double c;
};

RepOutcome run_rep(const MCConfig& cfg, const std::vector<CellKey>& cells, std::uint64_t rep,
                   const EstimatorOverride& override) {
    RepOutcome out;
    TimeSeries series =
        simulate_series(cfg.spec, cfg.dist, cfg.n, cfg.burn_in, derive_seed(cfg.seed, rep));
    ModelSpec fitted;
    try {
        if (cfg.spec.family == Family::AR && cfg.spec.theta.size() == 1)
            fitted = ModelSpec::ar1(fit_ar1_coefficient(series));
        else
            fitted = fit(series, cfg.spec.family, cfg.spec);
    } catch (const degenerate_input_error&) {
        out.degenerate = true;
        return out;
    }
    ResidualSet res = residuals(series, fitted);
    ELWeights el = solve_el_weights(res);
    out.fallback = !el.solved;

    if (override) {
        out.estimates.assign(cells.size(), override(res, el, fitted));
        return out;
    }

    bool clamp = is_cdf_target(cfg.task.target);
    out.estimates.reserve(cells.size());
    for (const CellKey& cell : cells) {
        KernelConfig k{cfg.kernel, std::isnan(cell.c) ? 2.0 : cell.c, cfg.beta, cfg.riemann_n,
                       cfg.bandwidth_scale};
        PredictionResult pr = predict(res, el, fitted, cfg.task, k, {cell.variant});
        double v = pr.values.at(cell.variant);
        out.estimates.push_back(clamp ? std::clamp(v, 0.0, 1.0) : v);
    }
    return out;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("VMPREDICT_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace

MCResult run(const MCConfig& cfg, const EstimatorOverride& override) {
    if (cfg.reps < 1) throw std::invalid_argument("run: reps must be >= 1");
    validate_stationary(cfg.spec);

    std::vector<CellKey> cells;
    const double no_c = std::numeric_limits<double>::quiet_NaN();
    for (Variant v : cfg.variants) {
        if (is_smoothed(v))
            for (double c : cfg.bandwidth_constants) cells.push_back({v, c});
        else
            cells.push_back({v, no_c});
    }

    MCResult result;
    result.config = cfg;
    result.truth = true_value(cfg.spec, cfg.dist, cfg.task);

    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(cfg.reps));
    int threads = std::min(resolve_threads(cfg.threads), cfg.reps);
    if (threads <= 1) {
        for (int r = 0; r < cfg.reps; ++r)
            outcomes[static_cast<std::size_t>(r)] =
                run_rep(cfg, cells, static_cast<std::uint64_t>(r), override);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (int r = t; r < cfg.reps; r += threads)
                    outcomes[static_cast<std::size_t>(r)] =
                        run_rep(cfg, cells, static_cast<std::uint64_t>(r), override);
            });
        }
        for (auto& th : pool) th.join();
    }

    // reduce in repetition order
    std::size_t m = cells.size();
    std::vector<NeumaierSum> sq(m), sq2(m), bias(m);
    for (const RepOutcome& o : outcomes) {
        if (o.degenerate) {
            ++result.excluded_reps;
            continue;
        }
        if (o.fallback) ++result.fallback_weight_reps;
        ++result.reps_used;
        for (std::size_t k = 0; k < m; ++k) {
            double err = o.estimates[k] - result.truth;
            sq[k].add(err * err);
            sq2[k].add(err * err * err * err);
            bias[k].add(err);
        }
    }
    if (result.reps_used == 0) throw degenerate_input_error("run: every repetition was degenerate");

    double used = static_cast<double>(result.reps_used);
    for (std::size_t k = 0; k < m; ++k) {
        MCCell cell;
        cell.variant = cells[k].variant;
        cell.c = cells[k].c;
        cell.mse = sq[k].value() / used;
        double var_sq = std::max(sq2[k].value() / used - cell.mse * cell.mse, 0.0);
        cell.se_mse = std::sqrt(var_sq / used);
        cell.mean_bias = bias[k].value() / used;
        result.cells.push_back(cell);
    }
    return result;
}

Table1Result table1(const Table1Options& opt) {
    Table1Result out;
    out.options = opt;
    for (const std::string& dist_name : opt.dists) {
        InnovationDist dist = InnovationDist::from_name(dist_name);
        for (int n : opt.ns) {
            MCConfig cfg;
            cfg.spec = ModelSpec::ar1(opt.theta);
            cfg.dist = dist;
            cfg.n = n;
            cfg.reps = opt.reps;
            // distinct seed block per (dist, n) so rows are independent
            cfg.seed = derive_seed(
                opt.seed, fnv1a64(dist_name.data(), dist_name.size()) ^ static_cast<std::uint64_t>(n));
            cfg.task = PredictionTask{2, {opt.x}, Cdf2Marginal{opt.u}};
            cfg.variants = {Variant::U, Variant::W, Variant::SW};
            cfg.bandwidth_constants = opt.cs;
            cfg.beta = opt.beta;
            cfg.riemann_n = opt.riemann_n;
            cfg.bandwidth_scale = opt.bandwidth_scale;
            cfg.burn_in = opt.burn_in;
            cfg.threads = opt.threads;
            MCResult res = run(cfg);

            Table1Row row;
            row.dist = dist_name;
            row.n = n;
            row.truth = res.truth;
            for (const MCCell& cell : res.cells) {
                if (cell.variant == Variant::U)
                    row.u_cell = cell;
                else if (cell.variant == Variant::W)
                    row.w_cell = cell;
                else
                    row.sw_cells.push_back(cell);
            }
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

std::string Table1Result::to_csv() const {
    std::ostringstream os;
    os << "dist,n,variant,c,mse_1e6,se_1e6\n";
    os.precision(10);
    auto line = [&os](const Table1Row& row, const MCCell& cell) {
        os << row.dist << ',' << row.n << ',' << variant_name(cell.variant) << ',';
        if (std::isnan(cell.c))
            os << "";
        else
            os << cell.c;
        os << ',' << cell.mse * 1e6 << ',' << cell.se_mse * 1e6 << '\n';
    };
    for (const Table1Row& row : rows) {
        line(row, row.u_cell);
        line(row, row.w_cell);
        for (const MCCell& cell : row.sw_cells) line(row, cell);
    }
    return os.str();
}

std::string Table1Result::to_text() const {
    std::ostringstream os;
    os << "1e6 x MSE (reps = " << options.reps << ")\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-10s %5s %8s %8s", "dist", "n", "U", "W");
    os << buf;
    for (double c : options.cs) {
        std::snprintf(buf, sizeof(buf), " %8.2f", c);
        os << buf;
    }
    os << '\n';
    for (const Table1Row& row : rows) {
        std::snprintf(buf, sizeof(buf), "%-10s %5d %8.0f %8.0f", row.dist.c_str(), row.n,
                      row.u_cell.mse * 1e6, row.w_cell.mse * 1e6);
        os << buf;
        for (const MCCell& cell : row.sw_cells) {
            std::snprintf(buf, sizeof(buf), " %8.0f", cell.mse * 1e6);
            os << buf;
        }
        os << '\n';
        std::snprintf(buf, sizeof(buf), "%-10s %5s %8.0f %8.0f", "  (se)", "", row.u_cell.se_mse * 1e6,
                      row.w_cell.se_mse * 1e6);
        os << buf;
        for (const MCCell& cell : row.sw_cells) {
            std::snprintf(buf, sizeof(buf), " %8.0f", cell.se_mse * 1e6);
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace vmp
