#pragma once

#include <span>
#include <vector>

#include "vmpredict/innovations.hpp"

namespace vmp {

/// Asymptotic variances of the unweighted (tau_sq) and weighted (tau_w_sq)
/// conditional-CDF estimators in the AR(1) model, with the decomposition
/// tau_sq = var_h + psi_term and tau_w_sq = tau_sq - c_term.
struct AsymptoticReport {
    double tau_sq = 0.0;
    double tau_w_sq = 0.0;
    double ratio = 1.0;  // tau_w_sq / tau_sq
    double var_h = 0.0;
    double psi_term = 0.0;
    double c_term = 0.0;
};

/// Lag-one conditional CDF at t given X_n = x, AR(1) coefficient theta:
/// tau^2 = F(a)(1 - F(a)) + x^2 f(a)^2 (1 - theta^2) with a = t - theta x,
/// and tau_w^2 = tau^2 - sigma^2 c_t^2, c_t = sigma^{-2} int_{-inf}^{a} y f(y) dy.
AsymptoticReport lag1_cdf_variances(double theta, double x, double t, const InnovationDist& dist);

/// Lag-two conditional CDF at u given X_n = x, AR(1) coefficient theta:
/// tau^2 = Var(h_u(eps)) + Psi_u^2 (1 - theta^2), tau_w^2 = tau^2 - c_u^2/sigma^2,
/// with Psi_u = -E[(eps + 2 theta x) f(u - theta eps - theta^2 x)],
/// c_u = E[eps h_u(eps)], and the three-branch h_u (theta > 0 / = 0 / < 0).
/// Expectations use adaptive Gauss-Kronrod on a shared node set.
AsymptoticReport lag2_cdf_variances(double theta, double x, double u, const InnovationDist& dist);

struct EfficiencySurface {
    std::vector<double> theta_grid;
    std::vector<double> x_grid;
    // row-major [theta][x]
    std::vector<std::vector<double>> tau_sq;
    std::vector<std::vector<double>> tau_w_sq;
    std::vector<std::vector<double>> ratio;

    double min_ratio() const;
    double max_ratio() const;
    double min_tau_w_sq() const;
    double max_tau_w_sq() const;
};

EfficiencySurface efficiency_surface(double u, const InnovationDist& dist,
                                     std::span<const double> theta_grid,
                                     std::span<const double> x_grid);

std::vector<double> linspace(double a, double b, int count);

/// Default Figure-style grids: theta 0.05..0.95 (19 points), x 0..2 (21 points).
std::vector<double> default_theta_grid();
std::vector<double> default_x_grid();

}  // namespace vmp
