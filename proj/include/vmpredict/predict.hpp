#pragma once

#include <functional>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "vmpredict/kernel.hpp"

namespace vmp {

/// Estimator variants: plain residual average (U), empirical-likelihood
/// weighted (W), kernel smoothed (S), smoothed and weighted (SW).
enum class Variant { U, W, S, SW };

Variant variant_from_name(const std::string& name);
const char* variant_name(Variant v);
inline bool is_weighted(Variant v) { return v == Variant::W || v == Variant::SW; }
inline bool is_smoothed(Variant v) { return v == Variant::S || v == Variant::SW; }

// ---- prediction targets -------------------------------------------------

struct Cdf1 { double t; };                       // P(X_{n+1} <= t | X_n = x)
struct Cdf2Joint { double t, u; };               // P(X_{n+1} <= t, X_{n+2} <= u | .)
struct Cdf2Marginal { double u; };               // P(X_{n+2} <= u | .)
struct Quantile1 { double prob; };
struct Quantile2 { double prob; };
struct Moment1 { double exponent; bool absolute; };
struct Custom1 { std::function<double(double)> q; };
struct Custom2 { std::function<double(double, double)> q; };

using Target =
    std::variant<Cdf1, Cdf2Joint, Cdf2Marginal, Quantile1, Quantile2, Moment1, Custom1, Custom2>;

struct PredictionTask {
    int lag = 1;  // 1 or 2
    std::vector<double> x;
    Target target = Cdf1{0.0};
};

bool is_cdf_target(const Target& t);
bool is_quantile_target(const Target& t);
int target_lag(const Target& t);

struct PredictionResult {
    std::map<Variant, double> values;  // CDF targets clamped to [0, 1]
    std::map<Variant, double> raw;     // pre-clamp values
    double lambda = 0.0;
    double bandwidth = 0.0;
    int riemann_n = 0;
    int n = 0;
    bool weights_solved = false;
};

// ---- lag-one estimators --------------------------------------------------

/// (1/n) sum w_i q(eps_i + m(x)); pass unit weights for the U variant.
double lag1_expectation(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                        std::span<const double> x, const std::function<double(double)>& q);

/// Smoothed version integral q(y + m(x)) f_w(y) dy, evaluated by the midpoint
/// rule on the kernel support: (2/(nN)) sum_i sum_s w_i q(eps_i + b u_s + m(x)) k(u_s).
double lag1_smoothed(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                     std::span<const double> x, const std::function<double(double)>& q,
                     const KernelConfig& k);

/// Closed form for the smoothed conditional CDF at t: (1/n) sum w_i K((t - m(x) - eps_i)/b).
double lag1_smoothed_cdf(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                         std::span<const double> x, double t, const KernelConfig& k);

// ---- lag-two von Mises estimators -----------------------------------------

/// Von Mises statistic for E(q(X_{n+1}, X_{n+2}) | X_n = x).
/// U/W: (1/n^2) sum_{ij} w_i w_j q(v1_i, eps_j + m(x_{-1}, v1_i)), v1_i = eps_i + m(x).
/// S/SW: the Riemann form 4/(nN)^2 sum_{ijst} w_i w_j q(...) k(u_s) k(u_t) with
/// u_1..u_N the midpoints of an N-cell partition of [-1, 1].
/// Indicator targets go through conditional_cdf, which collapses the inner
/// kernel integral to K(.) analytically; this entry point keeps the full sum.
double lag2_vonmises(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                     std::span<const double> x, const std::function<double(double, double)>& q2,
                     const KernelConfig& k, Variant variant);

// ---- conditional distribution functions and quantiles ---------------------

/// Raw (unclamped) conditional CDF value for a Cdf1/Cdf2Joint/Cdf2Marginal
/// target under the requested variant.
double conditional_cdf(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                       std::span<const double> x, const Target& target, const KernelConfig& k,
                       Variant variant);

/// Left inverse of the smoothed weighted conditional CDF: smallest t with
/// CDF(t) >= prob, located by bisection to 1e-10. `weighted` selects the SW
/// (default) or S path. Throws std::invalid_argument when prob is not
/// attainable.
double conditional_quantile(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                            std::span<const double> x, double prob, int lag,
                            const KernelConfig& k, bool weighted = true);

/// Evaluates the requested variants of the task. CDF-type values are clamped
/// to [0, 1] with the raw value kept in `raw`. Quantile targets are produced
/// for the smoothed variants (S, SW) only.
PredictionResult predict(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                         const PredictionTask& task, const KernelConfig& k,
                         const std::vector<Variant>& variants);

}  // namespace vmp
