#pragma once

#include <cmath>
#include <span>
#include <string>

#include "vmpredict/weights.hpp"

namespace vmp {

/// Smoothing kernels, all symmetric densities on [-1, 1]. Triweight is the
/// default; it is C^2 on the whole line (k' and k'' vanish at the support
/// edges), which the biweight and Epanechnikov kernels are not.
enum class KernelType { Triweight, Biweight, Epanechnikov };

KernelType kernel_from_name(const std::string& name);
const char* kernel_name(KernelType k);

double kernel_value(KernelType k, double u);
/// Antiderivative K(v) = integral_{-1}^{v} k, clamped to {0, 1} outside.
double kernel_cdf(KernelType k, double v);
/// Standard deviation of the kernel density (1/3 for the triweight).
double kernel_sd(KernelType k);

/// How the bandwidth constant is read:
///  - HalfSupport: b_n = c n^{-beta} is the half-support of the scaled kernel.
///  - KernelSd: c n^{-beta} is the kernel's standard deviation, so the
///    half-support becomes c n^{-beta} / sd(k) (x3 for the triweight). The
///    simulated MSE table harness uses this convention; see montecarlo.
enum class BandwidthScale { HalfSupport, KernelSd };

BandwidthScale bandwidth_scale_from_name(const std::string& name);
const char* bandwidth_scale_name(BandwidthScale s);

struct KernelConfig {
    KernelType kernel = KernelType::Triweight;
    double c = 2.0;        // bandwidth constant
    double beta = 0.25;    // bandwidth exponent, b_n = c n^{-beta}
    int riemann_n = 100;   // cells for the midpoint rule on [-1, 1]
    BandwidthScale scale = BandwidthScale::HalfSupport;

    double bandwidth(int n) const {
        double b = c * std::pow(static_cast<double>(n), -beta);
        return scale == BandwidthScale::KernelSd ? b / kernel_sd(kernel) : b;
    }
};

/// Residual density estimate  (1/n) sum w_i k((y - eps_i)/b) / b.
double kde(const ResidualSet& r, const ELWeights& w, const KernelConfig& k, double y);

/// Smoothed residual distribution function  (1/n) sum w_i K((y - eps_i)/b).
double smoothed_cdf(const ResidualSet& r, const ELWeights& w, const KernelConfig& k, double y);

}  // namespace vmp
