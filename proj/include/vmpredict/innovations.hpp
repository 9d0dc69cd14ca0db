#pragma once

#include <string>

#include "vmpredict/numerics.hpp"

namespace vmp {

enum class InnovationKind { StdNormal, LogisticUnitVar, T5UnitVar };

/// Innovation distribution: mean zero, unit variance. The logistic and t(5)
/// laws carry the scale that makes the variance one (s = sqrt(3)/pi and
/// sqrt(3/5) respectively). All closed forms below are exact; the test suite
/// checks them against quadrature.
class InnovationDist {
public:
    explicit InnovationDist(InnovationKind kind) : kind_(kind) {}
    static InnovationDist from_name(const std::string& name);

    InnovationKind kind() const { return kind_; }
    const char* name() const;

    double density(double y) const;        // f
    double density_deriv(double y) const;  // f'
    double cdf(double y) const;            // F
    double score(double y) const;          // -f'/f
    double variance() const { return 1.0; }

    /// Partial first moment  integral_{-inf}^{a} y f(y) dy  (tends to 0 at
    /// +inf since the mean is zero).
    double mean_below(double a) const;

    /// Half-width R such that the mass outside [-R, R] is below ~1e-12;
    /// expectations are integrated on [-R, R] with first-order tail
    /// corrections.
    double quad_cutoff() const;

    double sample(Rng& rng) const;

private:
    InnovationKind kind_;
};

}  // namespace vmp
