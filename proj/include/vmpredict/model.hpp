#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vmpredict/innovations.hpp"

namespace vmp {

enum class Family { AR, Expar1, Setar211 };

Family family_from_name(const std::string& name);
const char* family_name(Family f);

/// Parametric autoregression x_i = m(x_{i-p..i-1}; theta) + eps_i.
///  - AR(p): theta holds the lag-1..lag-p coefficients.
///  - Expar1: m(x) = (theta1 + theta2 exp(-decay x^2)) x, decay known.
///  - Setar211: m(x) = theta1 x for x <= threshold, theta2 x above it,
///    threshold known.
struct ModelSpec {
    Family family = Family::AR;
    std::vector<double> theta{0.0};
    double decay = 1.0;      // Expar1 only
    double threshold = 0.0;  // Setar211 only

    int order() const { return family == Family::AR ? static_cast<int>(theta.size()) : 1; }
    int dim() const { return static_cast<int>(theta.size()); }

    static ModelSpec ar1(double theta);
    static ModelSpec ar(std::vector<double> theta);
    static ModelSpec expar1(double theta1, double theta2, double decay);
    static ModelSpec setar211(double theta1, double theta2, double threshold);
};

/// Checks the stationarity region; throws std::invalid_argument outside it.
/// AR(p): companion-polynomial roots inside the unit disc. Expar1: |theta1|<1.
/// Setar211: theta1<1, theta2<1, theta1*theta2<1.
void validate_stationary(const ModelSpec& spec);

/// Mean function value m(x; theta); x is the lag vector (oldest entry first).
double regression_value(const ModelSpec& spec, std::span<const double> x);

/// Gradient of m(x; .) in theta.
std::vector<double> regression_gradient(const ModelSpec& spec, std::span<const double> x);

/// Observations x_{1-p}, ..., x_n stored oldest first (length n + p).
struct TimeSeries {
    std::vector<double> values;
    int n = 0;
    int p = 1;

    /// Value at original index i in [1-p, n].
    double at(int i) const { return values[static_cast<std::size_t>(i + p - 1)]; }
    /// Lag vector (x_{i-p}, ..., x_{i-1}) feeding the step to x_i, i in [1, n].
    std::span<const double> lag_vector(int i) const {
        return std::span<const double>(values).subspan(static_cast<std::size_t>(i - 1),
                                                       static_cast<std::size_t>(p));
    }
};

/// Simulates the stationary series: zero initial state, `burn_in` discarded
/// transient steps, then n recorded values. Deterministic given the seed.
TimeSeries simulate_series(const ModelSpec& spec, const InnovationDist& dist, int n, int burn_in,
                           std::uint64_t seed);

struct FitOptions {
    int max_iterations = 50;
    double step_tolerance = 1e-12;
};

/// Least-squares fit of theta for the given family (decay/threshold are taken
/// as known and copied from `hints`). AR(p) and the two nonlinear families
/// are all handled by Gauss-Newton with the analytic Jacobian, started from a
/// coarse grid over the stationarity region; the families are linear in theta
/// given the known shape constants, so this lands on the exact least-squares
/// solution. Throws degenerate_input_error when the normal equations are
/// singular (e.g. an empty SETAR regime).
ModelSpec fit(const TimeSeries& series, Family family, const ModelSpec& hints = ModelSpec{},
              const FitOptions& opts = FitOptions{});

/// AR(1) least-squares coefficient  sum x_{i-1} x_i / sum x_{i-1}^2.
double fit_ar1_coefficient(const TimeSeries& series);

}  // namespace vmp
