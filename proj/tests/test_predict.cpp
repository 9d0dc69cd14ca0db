#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vmpredict/predict.hpp"

using namespace vmp;

namespace {

const InnovationDist kNormal(InnovationKind::StdNormal);

struct Fitted {
    TimeSeries series;
    ModelSpec spec;
    ResidualSet res;
    ELWeights w;
};

Fitted make_fitted(const ModelSpec& truth, int n, std::uint64_t seed) {
    Fitted f;
    f.series = simulate_series(truth, kNormal, n, 500, seed);
    f.spec = truth.family == Family::AR && truth.theta.size() == 1
                 ? ModelSpec::ar1(fit_ar1_coefficient(f.series))
                 : fit(f.series, truth.family, truth);
    f.res = residuals(f.series, f.spec);
    f.w = solve_el_weights(f.res);
    return f;
}

// Independent naive evaluation of the lag-2 double sum, kept deliberately
// simple: plain loops in index order, no shared code with the library path.
double brute_force_lag2(const std::vector<double>& eps, const std::vector<double>& w,
                        const ModelSpec& spec, const std::vector<double>& x,
                        const std::function<double(double, double)>& q2) {
    std::size_t n = eps.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v1 = eps[i] + regression_value(spec, x);
        std::vector<double> x2(x.begin() + 1, x.end());
        x2.push_back(v1);
        double m = regression_value(spec, x2);
        for (std::size_t j = 0; j < n; ++j) acc += w[i] * w[j] * q2(v1, eps[j] + m);
    }
    return acc / (static_cast<double>(n) * static_cast<double>(n));
}

ResidualSet make_res(std::vector<double> eps) {
    ResidualSet r;
    r.eps = std::move(eps);
    return r;
}

}  // namespace

TEST_SUITE("predict") {

TEST_CASE("lag-1 mean: plain average vs weighted coincidence") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 400, 17);
    REQUIRE(f.w.solved);
    std::vector<double> x{0.8};
    double rx = regression_value(f.spec, x);
    auto identity = [](double y) { return y; };

    ELWeights unit = unit_weights(f.res.eps.size());
    double u_val = lag1_expectation(f.res, unit, f.spec, x, identity);
    double mean_eps = compensated_sum(f.res.eps) / static_cast<double>(f.res.eps.size());
    CHECK(u_val == doctest::Approx(mean_eps + rx).epsilon(1e-13));

    // the weighted estimator collapses to the direct plug-in value
    double w_val = lag1_expectation(f.res, f.w, f.spec, x, identity);
    CHECK(std::abs(w_val - rx) < 1e-12);
}

TEST_CASE("lag-1 second moment: weighted sum matches the plug-in expansion") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 300, 23);
    REQUIRE(f.w.solved);
    std::vector<double> x{-0.6};
    double rx = regression_value(f.spec, x);
    double direct = lag1_expectation(f.res, f.w, f.spec, x, [](double y) { return y * y; });
    NeumaierSum we2;
    for (std::size_t i = 0; i < f.res.eps.size(); ++i)
        we2.add(f.w.w[i] * f.res.eps[i] * f.res.eps[i]);
    double expanded = we2.value() / static_cast<double>(f.res.eps.size()) + rx * rx;
    CHECK(direct == doctest::Approx(expanded).epsilon(1e-12));
}

TEST_CASE("weighted lag-1 mean collapses for the nonlinear families too") {
    for (ModelSpec truth : {ModelSpec::expar1(0.4, 0.3, 1.0), ModelSpec::setar211(0.6, -0.4, 0.0)}) {
        Fitted f = make_fitted(truth, 400, 29);
        REQUIRE(f.w.solved);
        std::vector<double> x{0.5};
        double w_val = lag1_expectation(f.res, f.w, f.spec, x, [](double y) { return y; });
        CHECK(std::abs(w_val - regression_value(f.spec, x)) < 1e-12);
    }
}

TEST_CASE("constant function is preserved exactly under solved weights") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 250, 31);
    REQUIRE(f.w.solved);
    std::vector<double> x{0.4};
    KernelConfig k;
    auto one = [](double) { return 1.0; };
    CHECK(lag1_expectation(f.res, f.w, f.spec, x, one) == doctest::Approx(1.0).epsilon(1e-10));
    // the midpoint rule carries its own O(N^-4) normalization defect
    KernelConfig k512 = k;
    k512.riemann_n = 512;
    CHECK(lag1_smoothed(f.res, f.w, f.spec, x, one, k512) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("vanishing bandwidth recovers the unsmoothed estimators") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 300, 37);
    std::vector<double> x{0.4};
    KernelConfig k;
    k.c = 1e-8 * std::pow(300.0, 0.25);  // b_n = 1e-8
    for (auto q : {std::function<double(double)>([](double y) { return std::abs(y); }),
                   std::function<double(double)>([](double y) { return std::sin(y); })}) {
        double plain = lag1_expectation(f.res, f.w, f.spec, x, q);
        double smoothed = lag1_smoothed(f.res, f.w, f.spec, x, q, k);
        CHECK(smoothed == doctest::Approx(plain).epsilon(1e-6));
    }
}

TEST_CASE("closed-form smoothed CDF agrees with the Riemann route") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 10000, 41);
    std::vector<double> x{0.5};
    KernelConfig k;
    k.riemann_n = 10000;
    double t = 0.3;
    double closed = lag1_smoothed_cdf(f.res, f.w, f.spec, x, t, k);
    double riemann = lag1_smoothed(f.res, f.w, f.spec, x,
                                   [t](double y) { return y <= t ? 1.0 : 0.0; }, k);
    CHECK(closed == doctest::Approx(riemann).epsilon(1e-6));
}

TEST_CASE("lag-2: zero fitted coefficient collapses the inner sum") {
    ResidualSet r = make_res({-0.8, -0.1, 0.4, 1.1});
    ELWeights unit = unit_weights(4);
    ModelSpec zero = ModelSpec::ar1(0.0);
    std::vector<double> x{0.7};
    double u = 0.3;
    double got = conditional_cdf(r, unit, zero, x, Cdf2Marginal{u}, KernelConfig{}, Variant::U);
    NeumaierSum direct;
    for (double e : r.eps)
        if (e <= u) direct.add(1.0);
    CHECK(got == doctest::Approx(direct.value() / 4.0).epsilon(1e-15));
}

TEST_CASE("lag-2: constant q2 is preserved under solved weights") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 60, 43);
    REQUIRE(f.w.solved);
    std::vector<double> x{0.5};
    KernelConfig k;
    k.riemann_n = 512;
    auto one = [](double, double) { return 1.0; };
    CHECK(lag2_vonmises(f.res, f.w, f.spec, x, one, k, Variant::SW) ==
          doctest::Approx(1.0).epsilon(1e-9));
    KernelConfig k100;
    CHECK(lag2_vonmises(f.res, f.w, f.spec, x, one, k100, Variant::SW) ==
          doctest::Approx(1.0).epsilon(1e-7));
    CHECK(lag2_vonmises(f.res, f.w, f.spec, x, one, k, Variant::W) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("weighted lag-2 mean equals the plug-in square") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 350, 47);
    REQUIRE(f.w.solved);
    std::vector<double> x{0.5};
    double got = lag2_vonmises(f.res, f.w, f.spec, x, [](double, double w2) { return w2; },
                               KernelConfig{}, Variant::W);
    double theta = f.spec.theta[0];
    CHECK(std::abs(got - theta * theta * x[0]) < 1e-12);
}

TEST_CASE("small-instance brute force oracle for U and W") {
    Rng rng(501);
    std::vector<ModelSpec> specs{ModelSpec::ar1(0.45), ModelSpec::expar1(0.3, 0.25, 1.0),
                                 ModelSpec::setar211(0.5, -0.3, 0.1)};
    std::vector<std::function<double(double, double)>> qs{
        [](double v, double w2) { return v <= 0.4 && w2 <= 0.1 ? 1.0 : 0.0; },
        [](double v, double w2) { return std::exp(-0.25 * (v * v + w2 * w2)); },
        [](double, double w2) { return w2; }};
    for (int n = 2; n <= 5; ++n) {
        for (const ModelSpec& spec : specs) {
            std::vector<double> eps(static_cast<std::size_t>(n));
            bool pos = false, neg = false;
            for (double& e : eps) {
                e = rng.normal();
                pos |= e > 0;
                neg |= e < 0;
            }
            if (!(pos && neg)) eps[0] = -eps[0];
            ResidualSet r = make_res(eps);
            ELWeights el = solve_el_weights(r);
            ELWeights unit = unit_weights(eps.size());
            std::vector<double> x{0.6};
            for (const auto& q2 : qs) {
                double lib_u = lag2_vonmises(r, unit, spec, x, q2, KernelConfig{}, Variant::U);
                double ref_u = brute_force_lag2(eps, unit.w, spec, x, q2);
                CHECK(lib_u == doctest::Approx(ref_u).epsilon(1e-14));
                double lib_w = lag2_vonmises(r, el, spec, x, q2, KernelConfig{}, Variant::W);
                double ref_w = brute_force_lag2(eps, el.w, spec, x, q2);
                CHECK(lib_w == doctest::Approx(ref_w).epsilon(1e-14));
            }
            // the indicator path through conditional_cdf shares the oracle
            double lib_cdf =
                conditional_cdf(r, el, spec, x, Cdf2Joint{0.4, 0.1}, KernelConfig{}, Variant::W);
            CHECK(lib_cdf == doctest::Approx(brute_force_lag2(eps, el.w, spec, x, qs[0]))
                                 .epsilon(1e-13));
        }
    }
}

TEST_CASE("SW estimator is invariant under residual permutation") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 40, 53);
    std::vector<double> x{0.5};
    KernelConfig k;
    k.riemann_n = 32;
    double base = conditional_cdf(f.res, f.w, f.spec, x, Cdf2Marginal{0.0}, k, Variant::SW);

    std::vector<std::size_t> perm(f.res.eps.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.begin() + 20);
    std::rotate(perm.begin(), perm.begin() + 7, perm.end());
    ResidualSet rp;
    rp.theta_hat = f.res.theta_hat;
    ELWeights wp;
    wp.lambda = f.w.lambda;
    wp.solved = f.w.solved;
    for (std::size_t i : perm) {
        rp.eps.push_back(f.res.eps[i]);
        wp.w.push_back(f.w.w[i]);
    }
    double permuted = conditional_cdf(rp, wp, f.spec, x, Cdf2Marginal{0.0}, k, Variant::SW);
    CHECK(permuted == doctest::Approx(base).epsilon(1e-9));

    double base_q = lag2_vonmises(f.res, f.w, f.spec, x,
                                  [](double v, double w2) { return std::exp(-v * v - w2 * w2); },
                                  k, Variant::SW);
    double perm_q = lag2_vonmises(rp, wp, f.spec, x,
                                  [](double v, double w2) { return std::exp(-v * v - w2 * w2); },
                                  k, Variant::SW);
    CHECK(perm_q == doctest::Approx(base_q).epsilon(1e-9));
}

TEST_CASE("indicator collapse agrees with the full quadruple sum") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 12, 59);
    std::vector<double> x{0.5};
    double u = 0.2;
    auto q2 = [u](double, double w2) { return w2 <= u ? 1.0 : 0.0; };
    for (int N : {501, 1001}) {
        KernelConfig k;
        k.riemann_n = N;
        double collapse = conditional_cdf(f.res, f.w, f.spec, x, Cdf2Marginal{u}, k, Variant::SW);
        double full = lag2_vonmises(f.res, f.w, f.spec, x, q2, k, Variant::SW);
        CHECK(full == doctest::Approx(collapse).epsilon(5.0 / N));
    }
}

TEST_CASE("midpoint rule converges at second order or better") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 20, 61);
    std::vector<double> x{0.5};
    auto q2 = [](double v, double w2) { return std::exp(-0.25 * (v * v + w2 * w2)); };
    std::vector<double> log_n, log_d;
    for (int N : {4, 8, 16, 32}) {
        KernelConfig ka, kb;
        ka.riemann_n = N;
        kb.riemann_n = 2 * N;
        double a = lag2_vonmises(f.res, f.w, f.spec, x, q2, ka, Variant::SW);
        double b = lag2_vonmises(f.res, f.w, f.spec, x, q2, kb, Variant::SW);
        REQUIRE(std::abs(a - b) > 1e-15);
        log_n.push_back(std::log(static_cast<double>(N)));
        log_d.push_back(std::log(std::abs(a - b)));
    }
    double mx = 0, my = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        mx += log_n[i];
        my += log_d[i];
    }
    mx /= static_cast<double>(log_n.size());
    my /= static_cast<double>(log_n.size());
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        sxx += (log_n[i] - mx) * (log_n[i] - mx);
        sxy += (log_n[i] - mx) * (log_d[i] - my);
    }
    double slope = sxy / sxx;
    CHECK(slope <= -1.9);
}

TEST_CASE("conditional CDF boundary values and monotonicity") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 150, 67);
    REQUIRE(f.w.solved);
    std::vector<double> x{0.5};
    KernelConfig k;
    k.riemann_n = 50;
    double wsum = f.w.sum() / static_cast<double>(f.res.eps.size());
    for (Variant v : {Variant::U, Variant::W, Variant::S, Variant::SW}) {
        CAPTURE(variant_name(v));
        double hi = conditional_cdf(f.res, f.w, f.spec, x, Cdf1{1e6}, k, v);
        double expect_hi = is_weighted(v) ? wsum : 1.0;
        CHECK(hi == doctest::Approx(expect_hi).epsilon(1e-12));
        CHECK(conditional_cdf(f.res, f.w, f.spec, x, Cdf2Marginal{-1e6}, k, v) == 0.0);

        double prev = -1.0;
        for (double t = -3.0; t <= 3.0; t += 0.25) {  // lag 1 in t
            double cur = conditional_cdf(f.res, f.w, f.spec, x, Cdf1{t}, k, v);
            CHECK(cur >= prev - 1e-14);
            prev = cur;
        }
        prev = -1.0;
        for (double u = -3.0; u <= 3.0; u += 0.5) {  // lag 2 in u
            double cur = conditional_cdf(f.res, f.w, f.spec, x, Cdf2Marginal{u}, k, v);
            CHECK(cur >= prev - 1e-14);
            prev = cur;
        }
        prev = -1.0;
        for (double t = -2.0; t <= 2.0; t += 0.5) {  // joint in t at fixed u
            double cur = conditional_cdf(f.res, f.w, f.spec, x, Cdf2Joint{t, 0.5}, k, v);
            CHECK(cur >= prev - 1e-14);
            prev = cur;
        }
        CHECK(conditional_cdf(f.res, f.w, f.spec, x, Cdf2Joint{1e9, 0.5}, k, v) ==
              doctest::Approx(conditional_cdf(f.res, f.w, f.spec, x, Cdf2Marginal{0.5}, k, v))
                  .epsilon(1e-12));
    }
}

TEST_CASE("lag-2 SW estimate approaches the analytic value") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 2000, 71);
    std::vector<double> x{0.5};
    double est = conditional_cdf(f.res, f.w, f.spec, x, Cdf2Marginal{0.0}, KernelConfig{},
                                 Variant::SW);
    CHECK(std::abs(est - 0.45548964625531699) < 0.03);
}

TEST_CASE("quantile round-trip and symmetry") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 200, 73);
    REQUIRE(f.w.solved);
    std::vector<double> x{0.5};
    KernelConfig k;
    for (double prob : {0.1, 0.5, 0.9}) {
        for (int lag : {1, 2}) {
            double q = conditional_quantile(f.res, f.w, f.spec, x, prob, lag, k);
            Target tgt = lag == 1 ? Target(Cdf1{q}) : Target(Cdf2Marginal{q});
            double back = conditional_cdf(f.res, f.w, f.spec, x, tgt, k, Variant::SW);
            CHECK(back >= prob);
            CHECK(back <= prob + 1e-8);
        }
    }

    // symmetric two-point residuals, zero shift: the median is zero
    ResidualSet sym = make_res({-0.7, 0.7});
    ELWeights wsym = solve_el_weights(sym);
    REQUIRE(wsym.solved);
    double med = conditional_quantile(sym, wsym, ModelSpec::ar1(0.3), std::vector{0.0}, 0.5, 1, k);
    CHECK(std::abs(med) <= 1e-9);
}

TEST_CASE("quantile rejects unattainable probabilities") {
    ResidualSet r = make_res({-0.5, 0.5});
    ELWeights w = solve_el_weights(r);
    KernelConfig k;
    CHECK_THROWS_AS(conditional_quantile(r, w, ModelSpec::ar1(0.3), std::vector{0.0}, 1.2, 1, k),
                    std::invalid_argument);
    ELWeights half;  // deliberately deficient weights: CDF tops out at 1/2
    half.w = {0.5, 0.5};
    half.solved = false;
    CHECK_THROWS_AS(conditional_quantile(r, half, ModelSpec::ar1(0.3), std::vector{0.0}, 0.9, 1, k),
                    std::invalid_argument);
}

TEST_CASE("predict assembles variants with clamping and diagnostics") {
    Fitted f = make_fitted(ModelSpec::ar1(0.5), 300, 79);
    PredictionTask task{2, {0.5}, Cdf2Marginal{0.0}};
    KernelConfig k;
    PredictionResult pr = predict(f.res, f.w, f.spec, task, k,
                                  {Variant::U, Variant::W, Variant::S, Variant::SW});
    CHECK(pr.values.size() == 4);
    CHECK(pr.n == 300);
    CHECK(pr.riemann_n == 100);
    CHECK(pr.bandwidth == doctest::Approx(2.0 * std::pow(300.0, -0.25)));
    CHECK(pr.weights_solved == f.w.solved);
    for (const auto& [v, val] : pr.values) {
        CHECK(val >= 0.0);
        CHECK(val <= 1.0);
        CHECK(val == std::clamp(pr.raw.at(v), 0.0, 1.0));
    }
    // weighted and unweighted coincide when lambda = 0
    ELWeights unit = unit_weights(f.res.eps.size());
    PredictionResult pu = predict(f.res, unit, f.spec, task, k, {Variant::U, Variant::W});
    CHECK(pu.values.at(Variant::U) == pu.values.at(Variant::W));
}

}  // TEST_SUITE
