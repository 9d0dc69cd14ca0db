#include "vmpredict/innovations.hpp"

#include <cmath>
#include <stdexcept>

namespace vmp {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934382;
// logistic scale making the variance one (var = pi^2 s^2 / 3)
constexpr double kLogisticScale = 0.5513288954217920495113265;  // sqrt(3)/pi
// t(5) scale making the variance one (var(t5) = 5/3)
constexpr double kT5Scale = 0.7745966692414833770358531;  // sqrt(3/5)
constexpr double kT5Norm = 0.3796066898224944311876068;   // 8 / (3 sqrt(5) pi)
constexpr double kSqrt5 = 2.2360679774997896964091736687;

double norm_pdf(double y) { return kInvSqrt2Pi * std::exp(-0.5 * y * y); }
double norm_cdf(double y) { return 0.5 * std::erfc(-y * 0.7071067811865475244008443621048490); }

double logistic_cdf(double y) { return 1.0 / (1.0 + std::exp(-y / kLogisticScale)); }

double t5_pdf_std(double u) {
    double q = 1.0 + u * u / 5.0;
    return kT5Norm / (q * q * q);
}

double t5_cdf_std(double u) {
    // closed form for five degrees of freedom via u = sqrt(5) tan(theta)
    double th = std::atan(u / kSqrt5);
    return 0.5 + th / kPi + 2.0 * std::sin(2.0 * th) / (3.0 * kPi) + std::sin(4.0 * th) / (12.0 * kPi);
}

}  // namespace

InnovationDist InnovationDist::from_name(const std::string& name) {
    if (name == "normal" || name == "gaussian") return InnovationDist(InnovationKind::StdNormal);
    if (name == "logistic") return InnovationDist(InnovationKind::LogisticUnitVar);
    if (name == "t5") return InnovationDist(InnovationKind::T5UnitVar);
    throw std::invalid_argument("unknown innovation distribution: " + name);
}

const char* InnovationDist::name() const {
    switch (kind_) {
        case InnovationKind::StdNormal: return "normal";
        case InnovationKind::LogisticUnitVar: return "logistic";
        case InnovationKind::T5UnitVar: return "t5";
    }
    return "?";
}

double InnovationDist::density(double y) const {
    switch (kind_) {
        case InnovationKind::StdNormal: return norm_pdf(y);
        case InnovationKind::LogisticUnitVar: {
            double F = logistic_cdf(y);
            return F * (1.0 - F) / kLogisticScale;
        }
        case InnovationKind::T5UnitVar: return t5_pdf_std(y / kT5Scale) / kT5Scale;
    }
    return 0.0;
}

double InnovationDist::density_deriv(double y) const {
    switch (kind_) {
        case InnovationKind::StdNormal: return -y * norm_pdf(y);
        case InnovationKind::LogisticUnitVar: {
            double F = logistic_cdf(y);
            double f = F * (1.0 - F) / kLogisticScale;
            return f * (1.0 - 2.0 * F) / kLogisticScale;
        }
        case InnovationKind::T5UnitVar: {
            double u = y / kT5Scale;
            double q = 1.0 + u * u / 5.0;
            return -1.2 * u * kT5Norm / (q * q * q * q) / (kT5Scale * kT5Scale);
        }
    }
    return 0.0;
}

double InnovationDist::cdf(double y) const {
    switch (kind_) {
        case InnovationKind::StdNormal: return norm_cdf(y);
        case InnovationKind::LogisticUnitVar: return logistic_cdf(y);
        case InnovationKind::T5UnitVar: return t5_cdf_std(y / kT5Scale);
    }
    return 0.0;
}

double InnovationDist::score(double y) const {
    switch (kind_) {
        case InnovationKind::StdNormal: return y;
        case InnovationKind::LogisticUnitVar:
            return (2.0 * logistic_cdf(y) - 1.0) / kLogisticScale;
        case InnovationKind::T5UnitVar: {
            double u = y / kT5Scale;
            return 1.2 * u / ((1.0 + u * u / 5.0) * kT5Scale);
        }
    }
    return 0.0;
}

double InnovationDist::mean_below(double a) const {
    switch (kind_) {
        case InnovationKind::StdNormal: return -norm_pdf(a);
        case InnovationKind::LogisticUnitVar: {
            // a F(a) - s log(1 + e^{a/s}), with the log1p/softplus split for
            // large |a| so the two terms cancel exactly in the upper tail
            double z = a / kLogisticScale;
            double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
            return a * logistic_cdf(a) - kLogisticScale * softplus;
        }
        case InnovationKind::T5UnitVar: {
            double u = a / kT5Scale;
            double q = 1.0 + u * u / 5.0;
            return -kT5Scale * kT5Norm * 1.25 / (q * q);
        }
    }
    return 0.0;
}

double InnovationDist::quad_cutoff() const {
    switch (kind_) {
        case InnovationKind::StdNormal: return 9.0;
        case InnovationKind::LogisticUnitVar: return 20.0;
        case InnovationKind::T5UnitVar: return 400.0;  // polynomial tails
    }
    return 9.0;
}

double InnovationDist::sample(Rng& rng) const {
    switch (kind_) {
        case InnovationKind::StdNormal: return rng.normal();
        case InnovationKind::LogisticUnitVar: {
            double u = rng.uniform();
            if (u >= 1.0) u = 1.0 - 0x1.0p-53;
            return kLogisticScale * std::log(u / (1.0 - u));
        }
        case InnovationKind::T5UnitVar: {
            // ratio of a normal to an independent scaled chi(5)
            double z = rng.normal();
            double chisq = 0.0;
            for (int k = 0; k < 5; ++k) {
                double g = rng.normal();
                chisq += g * g;
            }
            return kT5Scale * z / std::sqrt(chisq / 5.0);
        }
    }
    return 0.0;
}

}  // namespace vmp
