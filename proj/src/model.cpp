#include "vmpredict/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace vmp {

Family family_from_name(const std::string& name) {
    if (name == "ar" || name == "ar1") return Family::AR;
    if (name == "expar1" || name == "expar") return Family::Expar1;
    if (name == "setar211" || name == "setar") return Family::Setar211;
    throw std::invalid_argument("unknown model family: " + name);
}

const char* family_name(Family f) {
    switch (f) {
        case Family::AR: return "ar";
        case Family::Expar1: return "expar1";
        case Family::Setar211: return "setar211";
    }
    return "?";
}

ModelSpec ModelSpec::ar1(double theta) { return ModelSpec{Family::AR, {theta}}; }
ModelSpec ModelSpec::ar(std::vector<double> theta) { return ModelSpec{Family::AR, std::move(theta)}; }
ModelSpec ModelSpec::expar1(double theta1, double theta2, double decay) {
    return ModelSpec{Family::Expar1, {theta1, theta2}, decay};
}
ModelSpec ModelSpec::setar211(double theta1, double theta2, double threshold) {
    return ModelSpec{Family::Setar211, {theta1, theta2}, 1.0, threshold};
}

namespace {

// Durand-Kerner roots of z^p - theta_1 z^{p-1} - ... - theta_p.
bool ar_roots_inside_unit_disc(const std::vector<double>& theta) {
    int p = static_cast<int>(theta.size());
    if (p == 1) return std::abs(theta[0]) < 1.0;
    std::vector<std::complex<double>> coef(p + 1);  // monic, descending powers
    coef[0] = 1.0;
    for (int k = 1; k <= p; ++k) coef[k] = -theta[static_cast<std::size_t>(k - 1)];
    auto eval = [&](std::complex<double> z) {
        std::complex<double> v = 0.0;
        for (const auto& c : coef) v = v * z + c;
        return v;
    };
    std::vector<std::complex<double>> r(p);
    for (int k = 0; k < p; ++k)
        r[k] = std::polar(0.9, 0.7 + 2.0 * 3.14159265358979323846 * k / p);
    for (int it = 0; it < 400; ++it) {
        double move = 0.0;
        for (int k = 0; k < p; ++k) {
            std::complex<double> denom = 1.0;
            for (int j = 0; j < p; ++j)
                if (j != k) denom *= (r[k] - r[j]);
            std::complex<double> step = eval(r[k]) / denom;
            r[k] -= step;
            move = std::max(move, std::abs(step));
        }
        if (move < 1e-13) break;
    }
    for (const auto& z : r)
        if (std::abs(z) >= 1.0 - 1e-12) return false;
    return true;
}

}  // namespace

void validate_stationary(const ModelSpec& spec) {
    switch (spec.family) {
        case Family::AR:
            if (spec.theta.empty()) throw std::invalid_argument("AR model needs at least one coefficient");
            if (!ar_roots_inside_unit_disc(spec.theta))
                throw std::invalid_argument("AR coefficients outside the stationarity region");
            return;
        case Family::Expar1:
            if (spec.theta.size() != 2) throw std::invalid_argument("Expar1 needs theta of dimension 2");
            if (std::abs(spec.theta[0]) >= 1.0)
                throw std::invalid_argument("Expar1 requires |theta1| < 1");
            return;
        case Family::Setar211:
            if (spec.theta.size() != 2) throw std::invalid_argument("Setar211 needs theta of dimension 2");
            if (!(spec.theta[0] < 1.0 && spec.theta[1] < 1.0 && spec.theta[0] * spec.theta[1] < 1.0))
                throw std::invalid_argument(
                    "Setar211 requires theta1 < 1, theta2 < 1 and theta1*theta2 < 1");
            return;
    }
}

double regression_value(const ModelSpec& spec, std::span<const double> x) {
    switch (spec.family) {
        case Family::AR: {
            // theta[k-1] multiplies the lag-k value; x is oldest-first
            double v = 0.0;
            std::size_t p = spec.theta.size();
            for (std::size_t k = 0; k < p; ++k) v += spec.theta[k] * x[p - 1 - k];
            return v;
        }
        case Family::Expar1:
            return (spec.theta[0] + spec.theta[1] * std::exp(-spec.decay * x[0] * x[0])) * x[0];
        case Family::Setar211:
            return (x[0] <= spec.threshold ? spec.theta[0] : spec.theta[1]) * x[0];
    }
    return 0.0;
}

std::vector<double> regression_gradient(const ModelSpec& spec, std::span<const double> x) {
    switch (spec.family) {
        case Family::AR: {
            std::size_t p = spec.theta.size();
            std::vector<double> g(p);
            for (std::size_t k = 0; k < p; ++k) g[k] = x[p - 1 - k];
            return g;
        }
        case Family::Expar1:
            return {x[0], x[0] * std::exp(-spec.decay * x[0] * x[0])};
        case Family::Setar211:
            if (x[0] <= spec.threshold) return {x[0], 0.0};
            return {0.0, x[0]};
    }
    return {};
}

TimeSeries simulate_series(const ModelSpec& spec, const InnovationDist& dist, int n, int burn_in,
                           std::uint64_t seed) {
    validate_stationary(spec);
    int p = spec.order();
    if (n < p + 2) throw std::invalid_argument("simulate_series: n must be at least p + 2");
    if (burn_in < 0) throw std::invalid_argument("simulate_series: burn_in must be nonnegative");

    Rng rng(seed);
    std::vector<double> state(static_cast<std::size_t>(p), 0.0);  // oldest first
    auto step = [&](double eps) {
        double next = regression_value(spec, state) + eps;
        for (std::size_t k = 0; k + 1 < state.size(); ++k) state[k] = state[k + 1];
        state.back() = next;
    };
    for (int b = 0; b < burn_in; ++b) step(dist.sample(rng));

    TimeSeries ts;
    ts.n = n;
    ts.p = p;
    ts.values = state;  // x_{1-p} .. x_0 after the transient
    ts.values.reserve(static_cast<std::size_t>(n + p));
    for (int i = 0; i < n; ++i) {
        step(dist.sample(rng));
        ts.values.push_back(state.back());
    }
    return ts;
}

double fit_ar1_coefficient(const TimeSeries& series) {
    NeumaierSum num, den;
    for (int i = 1; i <= series.n; ++i) {
        double prev = series.at(i - 1);
        num.add(prev * series.at(i));
        den.add(prev * prev);
    }
    if (den.value() == 0.0)
        throw degenerate_input_error("fit: sum of squared lags is zero");
    return num.value() / den.value();
}

namespace {

// Gaussian elimination with partial pivoting; throws on (near-)singularity.
std::vector<double> solve_spd(std::vector<std::vector<double>> a, std::vector<double> b) {
    std::size_t d = b.size();
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12 * (1.0 + std::abs(a[col][col])))
            throw degenerate_input_error("fit: singular normal equations");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < d; ++r) {
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < d; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(d);
    for (std::size_t ri = d; ri-- > 0;) {
        double s = b[ri];
        for (std::size_t c = ri + 1; c < d; ++c) s -= a[ri][c] * x[c];
        x[ri] = s / a[ri][ri];
    }
    return x;
}

double sse(const TimeSeries& series, const ModelSpec& spec) {
    NeumaierSum s;
    for (int i = 1; i <= series.n; ++i) {
        double r = series.at(i) - regression_value(spec, series.lag_vector(i));
        s.add(r * r);
    }
    return s.value();
}

// One Gauss-Newton pass returning the exact normal-equation step.
bool gauss_newton(const TimeSeries& series, ModelSpec& spec, const FitOptions& opts) {
    std::size_t d = spec.theta.size();
    for (int it = 0; it < opts.max_iterations; ++it) {
        std::vector<std::vector<double>> jtj(d, std::vector<double>(d, 0.0));
        std::vector<double> jtr(d, 0.0);
        for (int i = 1; i <= series.n; ++i) {
            auto x = series.lag_vector(i);
            double res = series.at(i) - regression_value(spec, x);
            std::vector<double> g = regression_gradient(spec, x);
            for (std::size_t a = 0; a < d; ++a) {
                jtr[a] += g[a] * res;
                for (std::size_t b = a; b < d; ++b) jtj[a][b] += g[a] * g[b];
            }
        }
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];
        std::vector<double> step = solve_spd(std::move(jtj), std::move(jtr));
        double maxstep = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            spec.theta[a] += step[a];
            maxstep = std::max(maxstep, std::abs(step[a]));
        }
        if (maxstep <= opts.step_tolerance * (1.0 + std::abs(spec.theta[0]))) return true;
    }
    return true;  // linear-in-theta families converge on the first pass anyway
}

}  // namespace

ModelSpec fit(const TimeSeries& series, Family family, const ModelSpec& hints,
              const FitOptions& opts) {
    int d = family == Family::AR ? series.p : 2;
    if (series.n < d + 2) throw std::invalid_argument("fit: series too short");

    std::vector<std::vector<double>> starts;
    if (family == Family::AR) {
        starts.push_back(std::vector<double>(static_cast<std::size_t>(d), 0.0));
    } else {
        for (double a : {-0.8, 0.0, 0.8})
            for (double b : {-0.8, 0.0, 0.8}) starts.push_back({a, b});
    }

    ModelSpec best;
    double best_sse = std::numeric_limits<double>::infinity();
    degenerate_input_error first_error("fit: no admissible start");
    bool any = false;
    for (const auto& start : starts) {
        ModelSpec cand;
        cand.family = family;
        cand.theta = start;
        cand.decay = hints.decay;
        cand.threshold = hints.threshold;
        try {
            gauss_newton(series, cand, opts);
        } catch (const degenerate_input_error& e) {
            if (!any) first_error = e;
            continue;
        }
        double s = sse(series, cand);
        if (!any || s < best_sse) {
            best = cand;
            best_sse = s;
            any = true;
        }
    }
    if (!any) throw first_error;
    return best;
}

}  // namespace vmp
