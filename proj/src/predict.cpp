#include "vmpredict/predict.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vmp {

Variant variant_from_name(const std::string& name) {
    if (name == "U" || name == "u") return Variant::U;
    if (name == "W" || name == "w") return Variant::W;
    if (name == "S" || name == "s") return Variant::S;
    if (name == "SW" || name == "sw") return Variant::SW;
    throw std::invalid_argument("unknown variant: " + name);
}

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::U: return "U";
        case Variant::W: return "W";
        case Variant::S: return "S";
        case Variant::SW: return "SW";
    }
    return "?";
}

bool is_cdf_target(const Target& t) {
    return std::holds_alternative<Cdf1>(t) || std::holds_alternative<Cdf2Joint>(t) ||
           std::holds_alternative<Cdf2Marginal>(t);
}

bool is_quantile_target(const Target& t) {
    return std::holds_alternative<Quantile1>(t) || std::holds_alternative<Quantile2>(t);
}

int target_lag(const Target& t) {
    if (std::holds_alternative<Cdf2Joint>(t) || std::holds_alternative<Cdf2Marginal>(t) ||
        std::holds_alternative<Quantile2>(t) || std::holds_alternative<Custom2>(t))
        return 2;
    return 1;
}

namespace {

// Midpoints of the N-cell equal partition of [-1, 1].
std::vector<double> midpoints(int N) {
    std::vector<double> u(static_cast<std::size_t>(N));
    for (int s = 0; s < N; ++s) u[static_cast<std::size_t>(s)] = -1.0 + (2.0 * s + 1.0) / N;
    return u;
}

// Lag vector for the second prediction step: (x_2, ..., x_p, v1).
std::vector<double> shifted_lag(std::span<const double> x, double v1) {
    std::vector<double> out(x.begin() + 1, x.end());
    out.push_back(v1);
    return out;
}

// Residuals sorted once with matching weights and weight prefix sums;
// smoothed and empirical weighted CDFs in O(log n + window).
struct SortedResiduals {
    std::vector<double> eps;
    std::vector<double> w;
    std::vector<double> prefix;  // prefix[i] = sum of w[0..i)
    double n;

    SortedResiduals(const ResidualSet& r, const ELWeights& wts) {
        std::size_t m = r.eps.size();
        n = static_cast<double>(m);
        std::vector<std::size_t> idx(m);
        for (std::size_t i = 0; i < m; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return r.eps[a] < r.eps[b]; });
        eps.resize(m);
        w.resize(m);
        prefix.resize(m + 1);
        prefix[0] = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            eps[i] = r.eps[idx[i]];
            w[i] = wts.w[idx[i]];
            prefix[i + 1] = prefix[i] + w[i];
        }
    }

    // (1/n) sum w_j 1[eps_j <= a]
    double empirical_cdf(double a) const {
        auto it = std::upper_bound(eps.begin(), eps.end(), a);
        return prefix[static_cast<std::size_t>(it - eps.begin())] / n;
    }

    // (1/n) sum w_j K((a - eps_j)/b)
    double smoothed(double a, KernelType kt, double b) const {
        auto lo = std::lower_bound(eps.begin(), eps.end(), a - b);
        auto hi = std::upper_bound(eps.begin(), eps.end(), a + b);
        NeumaierSum s;
        for (auto it = lo; it != hi; ++it)
            s.add(w[static_cast<std::size_t>(it - eps.begin())] *
                  kernel_cdf(kt, (a - *it) / b));
        return (prefix[static_cast<std::size_t>(lo - eps.begin())] + s.value()) / n;
    }
};

const ELWeights& pick_weights(Variant v, const ELWeights& w, ELWeights& unit_storage,
                              std::size_t n) {
    if (is_weighted(v)) return w;
    unit_storage = unit_weights(n);
    return unit_storage;
}

}  // namespace

double lag1_expectation(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                        std::span<const double> x, const std::function<double(double)>& q) {
    double shift = regression_value(spec, x);
    NeumaierSum s;
    for (std::size_t i = 0; i < r.eps.size(); ++i) s.add(w.w[i] * q(r.eps[i] + shift));
    return s.value() / static_cast<double>(r.eps.size());
}

double lag1_smoothed(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                     std::span<const double> x, const std::function<double(double)>& q,
                     const KernelConfig& k) {
    std::size_t n = r.eps.size();
    double b = k.bandwidth(static_cast<int>(n));
    double shift = regression_value(spec, x);
    std::vector<double> u = midpoints(k.riemann_n);
    std::vector<double> kv(u.size());
    for (std::size_t s = 0; s < u.size(); ++s) kv[s] = kernel_value(k.kernel, u[s]);
    NeumaierSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        NeumaierSum inner;
        for (std::size_t s = 0; s < u.size(); ++s)
            inner.add(kv[s] * q(r.eps[i] + b * u[s] + shift));
        acc.add(w.w[i] * inner.value());
    }
    return 2.0 * acc.value() / (static_cast<double>(n) * k.riemann_n);
}

double lag1_smoothed_cdf(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                         std::span<const double> x, double t, const KernelConfig& k) {
    return smoothed_cdf(r, w, k, t - regression_value(spec, x));
}

double lag2_vonmises(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                     std::span<const double> x, const std::function<double(double, double)>& q2,
                     const KernelConfig& k, Variant variant) {
    std::size_t n = r.eps.size();
    ELWeights unit_store;
    const ELWeights& wt = pick_weights(variant, w, unit_store, n);
    double shift = regression_value(spec, x);

    if (!is_smoothed(variant)) {
        NeumaierSum acc;
        for (std::size_t i = 0; i < n; ++i) {
            double v1 = r.eps[i] + shift;
            std::vector<double> x2 = shifted_lag(x, v1);
            double m = regression_value(spec, x2);
            NeumaierSum inner;
            for (std::size_t j = 0; j < n; ++j) inner.add(wt.w[j] * q2(v1, r.eps[j] + m));
            acc.add(wt.w[i] * inner.value());
        }
        return acc.value() / (static_cast<double>(n) * static_cast<double>(n));
    }

    // full Riemann quadruple sum; indicator targets should instead go through
    // conditional_cdf, which collapses the inner integral analytically
    double b = k.bandwidth(static_cast<int>(n));
    std::vector<double> u = midpoints(k.riemann_n);
    std::vector<double> kv(u.size());
    for (std::size_t s = 0; s < u.size(); ++s) kv[s] = kernel_value(k.kernel, u[s]);
    NeumaierSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < u.size(); ++t) {
            double v1 = r.eps[i] + b * u[t] + shift;
            std::vector<double> x2 = shifted_lag(x, v1);
            double m = regression_value(spec, x2);
            NeumaierSum inner;
            for (std::size_t j = 0; j < n; ++j) {
                double wj = wt.w[j];
                for (std::size_t s = 0; s < u.size(); ++s)
                    inner.add(wj * kv[s] * q2(v1, r.eps[j] + b * u[s] + m));
            }
            acc.add(wt.w[i] * kv[t] * inner.value());
        }
    }
    double nN = static_cast<double>(n) * k.riemann_n;
    return 4.0 * acc.value() / (nN * nN);
}

double conditional_cdf(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                       std::span<const double> x, const Target& target, const KernelConfig& k,
                       Variant variant) {
    if (!is_cdf_target(target)) throw std::invalid_argument("conditional_cdf: not a CDF target");
    std::size_t n = r.eps.size();
    ELWeights unit_store;
    const ELWeights& wt = pick_weights(variant, w, unit_store, n);
    double shift = regression_value(spec, x);

    if (const auto* c1 = std::get_if<Cdf1>(&target)) {
        double a = c1->t - shift;
        if (is_smoothed(variant)) return smoothed_cdf(r, wt, k, a);
        NeumaierSum s;
        for (std::size_t i = 0; i < n; ++i)
            if (r.eps[i] <= a) s.add(wt.w[i]);
        return s.value() / static_cast<double>(n);
    }

    bool joint = std::holds_alternative<Cdf2Joint>(target);
    double t_bound = joint ? std::get<Cdf2Joint>(target).t : 0.0;
    double u_bound = joint ? std::get<Cdf2Joint>(target).u : std::get<Cdf2Marginal>(target).u;

    SortedResiduals sorted(r, wt);
    if (!is_smoothed(variant)) {
        NeumaierSum acc;
        for (std::size_t i = 0; i < n; ++i) {
            double v1 = r.eps[i] + shift;
            if (joint && v1 > t_bound) continue;
            std::vector<double> x2 = shifted_lag(x, v1);
            acc.add(wt.w[i] * sorted.empirical_cdf(u_bound - regression_value(spec, x2)));
        }
        return acc.value() / static_cast<double>(n);
    }

    // smoothed: midpoint rule over the first coordinate, analytic K-collapse
    // of the kernel integral over the second
    double b = k.bandwidth(static_cast<int>(n));
    std::vector<double> u = midpoints(k.riemann_n);
    std::vector<double> kv(u.size());
    for (std::size_t s = 0; s < u.size(); ++s) kv[s] = kernel_value(k.kernel, u[s]);
    NeumaierSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        NeumaierSum inner;
        for (std::size_t t = 0; t < u.size(); ++t) {
            double v1 = r.eps[i] + b * u[t] + shift;
            if (joint && v1 > t_bound) continue;
            std::vector<double> x2 = shifted_lag(x, v1);
            inner.add(kv[t] * sorted.smoothed(u_bound - regression_value(spec, x2), k.kernel, b));
        }
        acc.add(wt.w[i] * inner.value());
    }
    return 2.0 * acc.value() / (static_cast<double>(n) * k.riemann_n);
}

double conditional_quantile(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                            std::span<const double> x, double prob, int lag,
                            const KernelConfig& k, bool weighted) {
    if (!(prob > 0.0 && prob < 1.0))
        throw std::invalid_argument("conditional_quantile: prob must lie in (0, 1)");
    if (lag != 1 && lag != 2) throw std::invalid_argument("conditional_quantile: lag must be 1 or 2");
    std::size_t n = r.eps.size();
    ELWeights unit_store;
    const ELWeights& wt = weighted ? w : (unit_store = unit_weights(n), unit_store);

    Variant variant = weighted ? Variant::SW : Variant::S;
    auto cdf = [&](double t) {
        Target tgt = lag == 1 ? Target(Cdf1{t}) : Target(Cdf2Marginal{t});
        return conditional_cdf(r, wt, spec, x, tgt, k, variant);
    };

    // The CDF is flat outside [min eps - b + shifts, max eps + b + shifts];
    // start from that heuristic bracket and expand until it straddles prob.
    double b = k.bandwidth(static_cast<int>(n));
    auto [mn, mx] = std::minmax_element(r.eps.begin(), r.eps.end());
    double shift = regression_value(spec, x);
    double lo, hi;
    if (lag == 1) {
        lo = *mn - b + shift;
        hi = *mx + b + shift;
    } else {
        double m_lo = std::numeric_limits<double>::infinity();
        double m_hi = -std::numeric_limits<double>::infinity();
        for (double e : r.eps)
            for (double s : {-b, b}) {
                double m = regression_value(spec, shifted_lag(x, e + s + shift));
                m_lo = std::min(m_lo, m);
                m_hi = std::max(m_hi, m);
            }
        lo = *mn - b + m_lo;
        hi = *mx + b + m_hi;
    }
    double span = std::max(hi - lo, 1.0);
    int guard = 0;
    while (cdf(lo) >= prob && guard++ < 60) lo -= span;
    guard = 0;
    while (cdf(hi) < prob && guard++ < 60) hi += span;
    if (cdf(hi) < prob)
        throw std::invalid_argument("conditional_quantile: prob exceeds the attainable CDF range");

    // bisection keeping cdf(hi) >= prob > cdf(lo); return the upper end
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        if (cdf(mid) >= prob)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

PredictionResult predict(const ResidualSet& r, const ELWeights& w, const ModelSpec& spec,
                         const PredictionTask& task, const KernelConfig& k,
                         const std::vector<Variant>& variants) {
    PredictionResult out;
    out.n = static_cast<int>(r.eps.size());
    out.lambda = w.lambda;
    out.weights_solved = w.solved;
    out.bandwidth = k.bandwidth(out.n);
    out.riemann_n = k.riemann_n;

    for (Variant v : variants) {
        ELWeights unit_store;
        const ELWeights& wt = pick_weights(v, w, unit_store, r.eps.size());
        std::optional<double> value;
        if (is_cdf_target(task.target)) {
            value = conditional_cdf(r, wt, spec, task.x, task.target, k, v);
        } else if (const auto* q1 = std::get_if<Quantile1>(&task.target)) {
            if (is_smoothed(v))
                value = conditional_quantile(r, w, spec, task.x, q1->prob, 1, k, is_weighted(v));
        } else if (const auto* q2 = std::get_if<Quantile2>(&task.target)) {
            if (is_smoothed(v))
                value = conditional_quantile(r, w, spec, task.x, q2->prob, 2, k, is_weighted(v));
        } else if (const auto* m1 = std::get_if<Moment1>(&task.target)) {
            double g = m1->exponent;
            if (!(g >= 1.0)) throw std::invalid_argument("Moment1: exponent must be >= 1");
            bool integer_exp = g == std::floor(g);
            if (!m1->absolute && !integer_exp)
                throw std::invalid_argument("Moment1: plain moments need an integer exponent");
            auto q = [g, abs = m1->absolute](double y) {
                return abs ? std::pow(std::abs(y), g) : std::pow(y, g);
            };
            value = is_smoothed(v) ? lag1_smoothed(r, wt, spec, task.x, q, k)
                                   : lag1_expectation(r, wt, spec, task.x, q);
        } else if (const auto* c1 = std::get_if<Custom1>(&task.target)) {
            value = is_smoothed(v) ? lag1_smoothed(r, wt, spec, task.x, c1->q, k)
                                   : lag1_expectation(r, wt, spec, task.x, c1->q);
        } else if (const auto* c2 = std::get_if<Custom2>(&task.target)) {
            value = lag2_vonmises(r, wt, spec, task.x, c2->q, k, v);
        }
        if (!value) continue;
        out.raw[v] = *value;
        out.values[v] = is_cdf_target(task.target) ? std::clamp(*value, 0.0, 1.0) : *value;
    }
    return out;
}

}  // namespace vmp
