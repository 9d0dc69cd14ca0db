#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vmpredict/predict.hpp"

namespace vmp {

struct MCConfig {
    ModelSpec spec;                     // data-generating model
    InnovationDist dist{InnovationKind::StdNormal};
    int n = 100;
    int reps = 2000;
    std::uint64_t seed = 1;
    PredictionTask task;
    std::vector<Variant> variants{Variant::U, Variant::W, Variant::SW};
    std::vector<double> bandwidth_constants{2.0};  // c values for the smoothed variants
    double beta = 0.25;
    int riemann_n = 100;
    KernelType kernel = KernelType::Triweight;
    BandwidthScale bandwidth_scale = BandwidthScale::HalfSupport;
    int burn_in = 500;
    int threads = 0;  // 0: hardware concurrency (or VMPREDICT_THREADS)
};

struct MCCell {
    Variant variant;
    double c;  // bandwidth constant; NaN for the unsmoothed variants
    double mse = 0.0;
    double se_mse = 0.0;  // standard error of the MSE estimate
    double mean_bias = 0.0;
};

struct MCResult {
    std::vector<MCCell> cells;
    double truth = 0.0;
    int reps_used = 0;
    int excluded_reps = 0;         // degenerate fits, excluded and counted
    int fallback_weight_reps = 0;  // lambda = 0 fallback (kept; part of the estimator)
    MCConfig config;               // echo of the run configuration
};

/// Exact conditional expectation the estimators target. Closed form where one
/// exists (AR(1) + normal lag-2 marginal CDF), one-dimensional quadrature to
/// ~1e-10 otherwise. Throws for targets without an implemented truth (Custom).
double true_value(const ModelSpec& spec, const InnovationDist& dist, const PredictionTask& task);

/// Test seam: replaces the per-repetition estimator evaluation.
using EstimatorOverride =
    std::function<double(const ResidualSet&, const ELWeights&, const ModelSpec& fitted)>;

/// Simulate / fit / solve weights / evaluate, `reps` times with per-rep seeds
/// derived from the master seed. Deterministic given the config; repetitions
/// run in parallel and are reduced in index order.
MCResult run(const MCConfig& config, const EstimatorOverride& override = nullptr);

// ---- the 9 x 8 simulation table -------------------------------------------

struct Table1Options {
    std::vector<std::string> dists{"normal", "logistic", "t5"};
    std::vector<int> ns{50, 100, 200};
    std::vector<double> cs{1.5, 1.75, 2.0, 2.25, 2.5, 2.75};
    double theta = 0.5;
    double x = 0.5;
    double u = 0.0;
    int reps = 2000;
    std::uint64_t seed = 20060101;
    int burn_in = 500;
    double beta = 0.25;
    int riemann_n = 100;
    // the published design reads the bandwidth constants in kernel-sd units
    BandwidthScale bandwidth_scale = BandwidthScale::KernelSd;
    int threads = 0;
};

struct Table1Row {
    std::string dist;
    int n = 0;
    double truth = 0.0;
    MCCell u_cell, w_cell;
    std::vector<MCCell> sw_cells;  // one per bandwidth constant
};

struct Table1Result {
    Table1Options options;
    std::vector<Table1Row> rows;

    std::string to_csv() const;   // scaled 1e6 x MSE plus standard errors
    std::string to_text() const;  // aligned rendering
};

/// Runs the full MSE grid: estimated P(X_{n+2} <= u | X_n = x) in the AR(1)
/// model for each innovation law, sample size, and estimator column.
Table1Result table1(const Table1Options& options);

}  // namespace vmp
