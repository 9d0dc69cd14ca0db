#include "vmpredict/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vmpredict/quadrature.hpp"

namespace vmp {

namespace {

AsymptoticReport assemble(double var_h, double psi_term, double c_term) {
    AsymptoticReport rep;
    rep.var_h = var_h;
    rep.psi_term = psi_term;
    rep.c_term = c_term;
    rep.tau_sq = var_h + psi_term;
    rep.tau_w_sq = std::max(rep.tau_sq - c_term, 0.0);
    rep.ratio = rep.tau_sq > 1e-300 ? rep.tau_w_sq / rep.tau_sq : 1.0;
    return rep;
}

}  // namespace

AsymptoticReport lag1_cdf_variances(double theta, double x, double t,
                                    const InnovationDist& dist) {
    if (!(std::abs(theta) < 1.0))
        throw std::invalid_argument("lag1_cdf_variances: |theta| must be < 1");
    double a = t - theta * x;
    double F = dist.cdf(a);
    double f = dist.density(a);
    double sig2 = dist.variance();
    double c_t = dist.mean_below(a) / sig2;
    return assemble(F * (1.0 - F), x * x * f * f * (1.0 - theta * theta), sig2 * c_t * c_t);
}

AsymptoticReport lag2_cdf_variances(double theta, double x, double u,
                                    const InnovationDist& dist) {
    if (!(std::abs(theta) < 1.0))
        throw std::invalid_argument("lag2_cdf_variances: |theta| must be < 1");
    double sig2 = dist.variance();
    double t2x = theta * theta * x;

    auto h = [&](double e) -> double {
        double first = dist.cdf(u - theta * e - t2x);
        if (theta > 0.0) return first + dist.cdf((u - e - t2x) / theta);
        if (theta < 0.0) return first + 1.0 - dist.cdf((u - e - t2x) / theta);
        return dist.cdf(u) + (e <= u ? 1.0 : 0.0);
    };

    double R = dist.quad_cutoff();
    std::vector<double> breaks = {-R, -8.0, -2.0, 0.0, 2.0, 8.0, R};
    if (theta != 0.0) {
        // the second h branch switches around e = u - theta^2 x on scale |theta|
        double center = u - t2x;
        double width = 6.0 * std::abs(theta);
        breaks.push_back(center - width);
        breaks.push_back(center);
        breaks.push_back(center + width);
    } else {
        breaks.push_back(u);  // indicator kink
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [R](double v) { return v < -R || v > R; }),
                 breaks.end());

    // integrands: h f, h^2 f, e h f, (e + 2 theta x) f(u - theta e - t2x) f(e),
    // refined together so Var(h) uses one node set
    quad::VectorIntegrator vi(
        [&](double e, double* out) {
            double fe = dist.density(e);
            double he = h(e);
            out[0] = he * fe;
            out[1] = he * he * fe;
            out[2] = e * he * fe;
            out[3] = (e + 2.0 * theta * x) * dist.density(u - theta * e - t2x) * fe;
        },
        4, 1e-10 / static_cast<double>(breaks.size()));
    std::vector<double> acc(4, 0.0);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) vi.integrate(breaks[i], breaks[i + 1], acc);

    // first-order tail corrections: h is essentially constant beyond R
    double mass_lo = dist.cdf(-R);
    double mass_hi = 1.0 - dist.cdf(R);
    double h_lo = h(-R), h_hi = h(R);
    double Eh = acc[0] + h_lo * mass_lo + h_hi * mass_hi;
    double Eh2 = acc[1] + h_lo * h_lo * mass_lo + h_hi * h_hi * mass_hi;
    double c_u = acc[2] + h_lo * dist.mean_below(-R) - h_hi * dist.mean_below(R);
    double Psi = -acc[3];

    double var_h = Eh2 - Eh * Eh;
    return assemble(var_h, Psi * Psi * (1.0 - theta * theta), c_u * c_u / sig2);
}

std::vector<double> linspace(double a, double b, int count) {
    if (count < 1) throw std::invalid_argument("linspace: count must be positive");
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = a;
        return v;
    }
    for (int i = 0; i < count; ++i)
        v[static_cast<std::size_t>(i)] = a + (b - a) * i / (count - 1);
    return v;
}

std::vector<double> default_theta_grid() { return linspace(0.05, 0.95, 19); }
std::vector<double> default_x_grid() { return linspace(0.0, 2.0, 21); }

EfficiencySurface efficiency_surface(double u, const InnovationDist& dist,
                                     std::span<const double> theta_grid,
                                     std::span<const double> x_grid) {
    EfficiencySurface s;
    s.theta_grid.assign(theta_grid.begin(), theta_grid.end());
    s.x_grid.assign(x_grid.begin(), x_grid.end());
    for (double theta : theta_grid) {
        std::vector<double> row_t, row_w, row_r;
        row_t.reserve(x_grid.size());
        for (double x : x_grid) {
            AsymptoticReport rep = lag2_cdf_variances(theta, x, u, dist);
            row_t.push_back(rep.tau_sq);
            row_w.push_back(rep.tau_w_sq);
            row_r.push_back(rep.ratio);
        }
        s.tau_sq.push_back(std::move(row_t));
        s.tau_w_sq.push_back(std::move(row_w));
        s.ratio.push_back(std::move(row_r));
    }
    return s;
}

namespace {
double extreme(const std::vector<std::vector<double>>& m, bool want_min) {
    double best = want_min ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
    for (const auto& row : m)
        for (double v : row) best = want_min ? std::min(best, v) : std::max(best, v);
    return best;
}
}  // namespace

double EfficiencySurface::min_ratio() const { return extreme(ratio, true); }
double EfficiencySurface::max_ratio() const { return extreme(ratio, false); }
double EfficiencySurface::min_tau_w_sq() const { return extreme(tau_w_sq, true); }
double EfficiencySurface::max_tau_w_sq() const { return extreme(tau_w_sq, false); }

}  // namespace vmp
