#pragma once

#include <vector>

#include "vmpredict/model.hpp"

namespace vmp {

/// Residuals eps_i = x_i - m(x_{i-p..i-1}; theta_hat), i = 1..n.
struct ResidualSet {
    std::vector<double> eps;
    ModelSpec theta_hat;
};

ResidualSet residuals(const TimeSeries& series, const ModelSpec& spec);

/// Empirical-likelihood weights w_i = 1 / (1 + lambda eps_i) with lambda
/// chosen so that sum w_i eps_i = 0 (then sum w_i = n follows identically).
/// When no solution exists (residuals all of one sign), lambda = 0 and all
/// weights are one, with solved = false.
struct ELWeights {
    double lambda = 0.0;
    std::vector<double> w;
    bool solved = false;

    double sum() const;  // sum of weights
};

ELWeights solve_el_weights(const ResidualSet& r);
ELWeights unit_weights(std::size_t n);

}  // namespace vmp
