#include "vmpredict/kernel.hpp"

#include <stdexcept>

namespace vmp {

KernelType kernel_from_name(const std::string& name) {
    if (name == "triweight") return KernelType::Triweight;
    if (name == "biweight") return KernelType::Biweight;
    if (name == "epanechnikov") return KernelType::Epanechnikov;
    throw std::invalid_argument("unknown kernel: " + name);
}

const char* kernel_name(KernelType k) {
    switch (k) {
        case KernelType::Triweight: return "triweight";
        case KernelType::Biweight: return "biweight";
        case KernelType::Epanechnikov: return "epanechnikov";
    }
    return "?";
}

double kernel_sd(KernelType k) {
    switch (k) {
        case KernelType::Triweight: return 1.0 / 3.0;                      // var 1/9
        case KernelType::Biweight: return 0.3779644730092272272145165;     // 1/sqrt(7)
        case KernelType::Epanechnikov: return 0.4472135954999579392818347; // 1/sqrt(5)
    }
    return 1.0;
}

BandwidthScale bandwidth_scale_from_name(const std::string& name) {
    if (name == "support" || name == "half-support") return BandwidthScale::HalfSupport;
    if (name == "sd" || name == "stddev") return BandwidthScale::KernelSd;
    throw std::invalid_argument("unknown bandwidth scale: " + name);
}

const char* bandwidth_scale_name(BandwidthScale s) {
    return s == BandwidthScale::HalfSupport ? "support" : "sd";
}

double kernel_value(KernelType k, double u) {
    if (u <= -1.0 || u >= 1.0) return 0.0;
    double q = 1.0 - u * u;
    switch (k) {
        case KernelType::Triweight: return 1.09375 * q * q * q;    // 35/32
        case KernelType::Biweight: return 0.9375 * q * q;          // 15/16
        case KernelType::Epanechnikov: return 0.75 * q;
    }
    return 0.0;
}

double kernel_cdf(KernelType k, double v) {
    if (v <= -1.0) return 0.0;
    if (v >= 1.0) return 1.0;
    double v2 = v * v;
    switch (k) {
        case KernelType::Triweight:
            // 35/32 (v - v^3 + 3/5 v^5 - 1/7 v^7) + 1/2
            return 1.09375 * v * (1.0 + v2 * (-1.0 + v2 * (0.6 - v2 / 7.0))) + 0.5;
        case KernelType::Biweight:
            return 0.9375 * v * (1.0 + v2 * (-2.0 / 3.0 + v2 * 0.2)) + 0.5;
        case KernelType::Epanechnikov:
            return 0.75 * v * (1.0 - v2 / 3.0) + 0.5;
    }
    return 0.0;
}

double kde(const ResidualSet& r, const ELWeights& w, const KernelConfig& k, double y) {
    std::size_t n = r.eps.size();
    double b = k.bandwidth(static_cast<int>(n));
    if (!(b > 0.0)) throw std::invalid_argument("kde: bandwidth must be positive");
    NeumaierSum s;
    for (std::size_t i = 0; i < n; ++i)
        s.add(w.w[i] * kernel_value(k.kernel, (y - r.eps[i]) / b));
    return s.value() / (b * static_cast<double>(n));
}

double smoothed_cdf(const ResidualSet& r, const ELWeights& w, const KernelConfig& k, double y) {
    std::size_t n = r.eps.size();
    double b = k.bandwidth(static_cast<int>(n));
    if (!(b > 0.0)) throw std::invalid_argument("smoothed_cdf: bandwidth must be positive");
    NeumaierSum s;
    for (std::size_t i = 0; i < n; ++i)
        s.add(w.w[i] * kernel_cdf(k.kernel, (y - r.eps[i]) / b));
    return s.value() / static_cast<double>(n);
}

}  // namespace vmp
