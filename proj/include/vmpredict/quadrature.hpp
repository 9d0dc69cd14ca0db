#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace vmp::quad {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

/// Adaptive Gauss-Kronrod for a vector-valued integrand. All components are
/// refined on the same node set (subdivision is driven by the worst
/// component), so derived quantities like E[h^2] - E[h]^2 stay consistent.
///
/// `f(x, out)` must fill `out[0..dim)`.
class VectorIntegrator {
public:
    using Fn = std::function<void(double, double*)>;

    VectorIntegrator(Fn f, std::size_t dim, double abs_tol, int max_depth = 48)
        : f_(std::move(f)), dim_(dim), tol_(abs_tol), max_depth_(max_depth) {}

    /// Integrate over [a, b]; adds into `acc` (size dim). Returns the
    /// estimated absolute error (max over components).
    double integrate(double a, double b, std::vector<double>& acc) {
        std::vector<double> val(dim_), err(dim_);
        double e = segment(a, b, tol_, 0, val);
        for (std::size_t k = 0; k < dim_; ++k) acc[k] += val[k];
        return e;
    }

private:
    double segment(double a, double b, double tol, int depth, std::vector<double>& out) {
        std::vector<double> gauss(dim_, 0.0), kron(dim_, 0.0), buf(dim_);
        double h = 0.5 * (b - a);
        double m = 0.5 * (a + b);
        for (std::size_t i = 0; i < 8; ++i) {
            double x1 = m - h * kronrod_nodes[i];
            double x2 = m + h * kronrod_nodes[i];
            f_(x1, buf.data());
            if (i == 7) {
                for (std::size_t k = 0; k < dim_; ++k) {
                    kron[k] += kronrod_weights[7] * buf[k];
                    gauss[k] += gauss_weights[3] * buf[k];
                }
                continue;
            }
            for (std::size_t k = 0; k < dim_; ++k) kron[k] += kronrod_weights[i] * buf[k];
            if (i % 2 == 1)
                for (std::size_t k = 0; k < dim_; ++k) gauss[k] += gauss_weights[i / 2] * buf[k];
            f_(x2, buf.data());
            for (std::size_t k = 0; k < dim_; ++k) kron[k] += kronrod_weights[i] * buf[k];
            if (i % 2 == 1)
                for (std::size_t k = 0; k < dim_; ++k) gauss[k] += gauss_weights[i / 2] * buf[k];
        }
        double err = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            kron[k] *= h;
            gauss[k] *= h;
            err = std::max(err, std::abs(kron[k] - gauss[k]));
        }
        err = std::pow(200.0 * err, 1.5);  // QUADPACK-style sharpened estimate
        if (err <= tol || depth >= max_depth_) {
            out = kron;
            return err;
        }
        std::vector<double> left(dim_), right(dim_);
        double e1 = segment(a, m, 0.5 * tol, depth + 1, left);
        double e2 = segment(m, b, 0.5 * tol, depth + 1, right);
        for (std::size_t k = 0; k < dim_; ++k) out[k] = left[k] + right[k];
        return e1 + e2;
    }

    Fn f_;
    std::size_t dim_;
    double tol_;
    int max_depth_;
};

/// Scalar adaptive quadrature over a segment list (splits let the caller mark
/// kinks or sharp transitions up front).
inline double integrate(const std::function<double(double)>& f, std::vector<double> breaks,
                        double abs_tol) {
    VectorIntegrator vi([&f](double x, double* out) { out[0] = f(x); }, 1,
                        abs_tol / std::max<std::size_t>(1, breaks.size() - 1));
    std::vector<double> acc(1, 0.0);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) vi.integrate(breaks[i], breaks[i + 1], acc);
    return acc[0];
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double abs_tol) {
    return integrate(f, std::vector<double>{a, b}, abs_tol);
}

}  // namespace vmp::quad
