#include "vmpredict/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vmp {

ResidualSet residuals(const TimeSeries& series, const ModelSpec& spec) {
    ResidualSet r;
    r.theta_hat = spec;
    r.eps.reserve(static_cast<std::size_t>(series.n));
    for (int i = 1; i <= series.n; ++i)
        r.eps.push_back(series.at(i) - regression_value(spec, series.lag_vector(i)));
    return r;
}

double ELWeights::sum() const { return compensated_sum(w); }

ELWeights unit_weights(std::size_t n) {
    ELWeights out;
    out.lambda = 0.0;
    out.w.assign(n, 1.0);
    out.solved = true;
    return out;
}

namespace {

// g(lambda) = sum eps_i / (1 + lambda eps_i); strictly decreasing between the
// poles, so a sign-certified bracket pins the root.
double g_of(const std::vector<double>& eps, double lambda) {
    NeumaierSum s;
    for (double e : eps) s.add(e / (1.0 + lambda * e));
    return s.value();
}

double g_deriv(const std::vector<double>& eps, double lambda) {
    NeumaierSum s;
    for (double e : eps) {
        double d = 1.0 + lambda * e;
        s.add(-e * e / (d * d));
    }
    return s.value();
}

}  // namespace

ELWeights solve_el_weights(const ResidualSet& r) {
    const std::vector<double>& eps = r.eps;
    std::size_t n = eps.size();
    ELWeights out;
    out.w.assign(n, 1.0);

    double emin = std::numeric_limits<double>::infinity();
    double emax = -std::numeric_limits<double>::infinity();
    double abs_sum = 0.0;
    for (double e : eps) {
        emin = std::min(emin, e);
        emax = std::max(emax, e);
        abs_sum += std::abs(e);
    }
    if (n == 0 || abs_sum == 0.0) {
        out.solved = true;  // all-zero residuals: constraints hold trivially
        return out;
    }
    if (!(emin < 0.0 && emax > 0.0)) return out;  // one-signed: no root, lambda = 0

    const double tol = 1e-12 * abs_sum;
    double g0 = g_of(eps, 0.0);
    if (std::abs(g0) <= tol) {
        out.solved = true;
        return out;
    }

    // Feasible interval (-1/emax, -1/emin) keeps every weight positive;
    // back off each pole by a relative margin.
    double lo = -1.0 / emax;
    double hi = -1.0 / emin;
    lo += std::abs(lo) * 1e-12;
    hi -= std::abs(hi) * 1e-12;
    double glo = g_of(eps, lo);
    double ghi = g_of(eps, hi);
    if (!(glo > 0.0 && ghi < 0.0)) return out;  // cannot certify the bracket

    double lambda = 0.0;
    double g = g0;
    if (g0 > 0.0)
        lo = 0.0, glo = g0;
    else
        hi = 0.0, ghi = g0;

    for (int it = 0; it < 200; ++it) {
        // Newton from the current iterate, bisection whenever it misbehaves
        double gp = g_deriv(eps, lambda);
        double next = (gp < 0.0) ? lambda - g / gp : std::numeric_limits<double>::quiet_NaN();
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        lambda = next;
        g = g_of(eps, lambda);
        if (g > 0.0)
            lo = lambda;
        else
            hi = lambda;
        if (std::abs(g) <= 0.05 * tol) break;
        if (hi - lo <= 1e-16 * (std::abs(lo) + std::abs(hi))) break;  // bracket exhausted
    }
    if (std::abs(g) > tol) return out;  // fall back to unit weights

    out.lambda = lambda;
    out.solved = true;
    for (std::size_t i = 0; i < n; ++i) out.w[i] = 1.0 / (1.0 + lambda * eps[i]);
    return out;
}

}  // namespace vmp
