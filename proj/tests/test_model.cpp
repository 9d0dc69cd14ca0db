#include <doctest.h>

#include <cmath>

#include "vmpredict/model.hpp"

using namespace vmp;

namespace {
const InnovationDist kNormal(InnovationKind::StdNormal);

std::vector<ModelSpec> sample_specs() {
    return {ModelSpec::ar1(0.5), ModelSpec::expar1(0.3, 0.2, 1.0),
            ModelSpec::setar211(0.5, -0.5, 0.0)};
}
}  // namespace

TEST_SUITE("model") {

TEST_CASE("regression_value for each family") {
    CHECK(regression_value(ModelSpec::ar1(0.5), std::vector{0.5}) == 0.25);
    CHECK(regression_value(ModelSpec::expar1(0.3, 0.2, 1.0), std::vector{0.0}) == 0.0);
    CHECK(regression_value(ModelSpec::setar211(0.5, -0.5, 0.0), std::vector{1.0}) == -0.5);
    // AR(2): theta_1 acts on the most recent lag
    CHECK(regression_value(ModelSpec::ar({0.5, 0.25}), std::vector{2.0, 1.0}) ==
          doctest::Approx(0.5 * 1.0 + 0.25 * 2.0));
}

TEST_CASE("regression_gradient closed forms") {
    auto g = regression_gradient(ModelSpec::ar1(0.5), std::vector{0.5});
    CHECK(g == std::vector{0.5});
    g = regression_gradient(ModelSpec::expar1(0.3, 0.2, 1.0), std::vector{0.0});
    CHECK(g == std::vector{0.0, 0.0});
    g = regression_gradient(ModelSpec::setar211(0.5, -0.5, 0.0), std::vector{-2.0});
    CHECK(g == std::vector{-2.0, 0.0});
}

TEST_CASE("regression_gradient matches central differences") {
    for (ModelSpec spec : sample_specs()) {
        for (double x : {-1.7, -0.4, 0.6, 2.1}) {  // away from the SETAR threshold
            std::vector<double> xv{x};
            auto grad = regression_gradient(spec, xv);
            for (std::size_t k = 0; k < spec.theta.size(); ++k) {
                double h = 1e-6;
                ModelSpec up = spec, dn = spec;
                up.theta[k] += h;
                dn.theta[k] -= h;
                double fd = (regression_value(up, xv) - regression_value(dn, xv)) / (2.0 * h);
                CHECK(grad[k] == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("stationarity validation") {
    CHECK_THROWS_AS(validate_stationary(ModelSpec::ar1(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(validate_stationary(ModelSpec::expar1(1.1, 0.0, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(validate_stationary(ModelSpec::setar211(0.5, 2.5, 0.0)),
                    std::invalid_argument);
    CHECK_NOTHROW(validate_stationary(ModelSpec::setar211(-3.0, 0.2, 0.0)));  // one-sided region
    CHECK_NOTHROW(validate_stationary(ModelSpec::ar({0.9, -0.5})));
    CHECK_THROWS_AS(validate_stationary(ModelSpec::ar({1.2, -0.1})), std::invalid_argument);
    CHECK_THROWS_AS(simulate_series(ModelSpec::ar1(1.01), kNormal, 100, 10, 1),
                    std::invalid_argument);
}

TEST_CASE("simulation is deterministic in the seed") {
    for (ModelSpec spec : sample_specs()) {
        TimeSeries a = simulate_series(spec, kNormal, 200, 100, 99);
        TimeSeries b = simulate_series(spec, kNormal, 200, 100, 99);
        CHECK(a.values == b.values);
        TimeSeries c = simulate_series(spec, kNormal, 200, 100, 100);
        CHECK(a.values != c.values);
    }
}

TEST_CASE("theta = 0 reproduces the raw innovation stream") {
    int burn = 50, n = 100;
    TimeSeries ts = simulate_series(ModelSpec::ar1(0.0), kNormal, n, burn, 1234);
    Rng rng(1234);
    for (int b = 0; b < burn; ++b) kNormal.sample(rng);
    for (int i = 1; i <= n; ++i) CHECK(ts.at(i) == kNormal.sample(rng));
}

TEST_CASE("stationary variance of AR(1) is 1/(1 - theta^2)") {
    TimeSeries ts = simulate_series(ModelSpec::ar1(0.5), kNormal, 100000, 500, 7);
    NeumaierSum s, s2;
    for (int i = 1; i <= ts.n; ++i) {
        s.add(ts.at(i));
        s2.add(ts.at(i) * ts.at(i));
    }
    double mean = s.value() / ts.n;
    double var = s2.value() / ts.n - mean * mean;
    CHECK(var == doctest::Approx(4.0 / 3.0).epsilon(0.02));
}

TEST_CASE("burn-in beyond mixing does not shift the distribution") {
    auto moments = [](const TimeSeries& ts) {
        NeumaierSum s, s2;
        for (int i = 1; i <= ts.n; ++i) {
            s.add(ts.at(i));
            s2.add(ts.at(i) * ts.at(i));
        }
        double mean = s.value() / ts.n;
        return std::pair{mean, s2.value() / ts.n - mean * mean};
    };
    auto [m1, v1] = moments(simulate_series(ModelSpec::ar1(0.5), kNormal, 200000, 500, 21));
    auto [m2, v2] = moments(simulate_series(ModelSpec::ar1(0.5), kNormal, 200000, 5000, 22));
    CHECK(std::abs(m1 - m2) < 0.02);
    CHECK(v1 == doctest::Approx(v2).epsilon(0.03));
}

TEST_CASE("AR(1) least squares on a worked series") {
    TimeSeries ts;
    ts.values = {0.0, 1.0, 0.5, 0.25};
    ts.n = 3;
    ts.p = 1;
    CHECK(fit_ar1_coefficient(ts) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("noiseless series is fitted exactly") {
    TimeSeries ts;
    ts.p = 1;
    ts.values = {1.0};
    for (int i = 0; i < 20; ++i) ts.values.push_back(0.5 * ts.values.back());
    ts.n = 20;
    CHECK(fit_ar1_coefficient(ts) == doctest::Approx(0.5).epsilon(1e-12));
    ModelSpec fitted = fit(ts, Family::AR);
    CHECK(fitted.theta[0] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("fit is consistent at n = 10000") {
    TimeSeries ts = simulate_series(ModelSpec::ar1(0.5), kNormal, 10000, 500, 3);
    CHECK(std::abs(fit_ar1_coefficient(ts) - 0.5) < 0.05);
}

TEST_CASE("fit error shrinks with n for every family") {
    for (ModelSpec truth : sample_specs()) {
        CAPTURE(family_name(truth.family));
        double prev = 1e100;
        for (int n : {200, 2000, 20000}) {
            double err = 0.0;
            for (std::uint64_t seed : {11, 12, 13, 14}) {
                TimeSeries ts = simulate_series(truth, kNormal, n, 500, seed);
                ModelSpec fitted = fit(ts, truth.family, truth);
                for (std::size_t k = 0; k < truth.theta.size(); ++k)
                    err += std::abs(fitted.theta[k] - truth.theta[k]);
            }
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev < 0.3);  // and ends up close
    }
}

TEST_CASE("SETAR fit equals regime-wise least squares") {
    ModelSpec truth = ModelSpec::setar211(0.6, -0.4, 0.0);
    TimeSeries ts = simulate_series(truth, kNormal, 2000, 500, 5);
    ModelSpec fitted = fit(ts, Family::Setar211, truth);

    NeumaierSum n1, d1, n2, d2;
    for (int i = 1; i <= ts.n; ++i) {
        double prev = ts.at(i - 1);
        if (prev <= truth.threshold) {
            n1.add(prev * ts.at(i));
            d1.add(prev * prev);
        } else {
            n2.add(prev * ts.at(i));
            d2.add(prev * prev);
        }
    }
    CHECK(fitted.theta[0] == doctest::Approx(n1.value() / d1.value()).epsilon(1e-9));
    CHECK(fitted.theta[1] == doctest::Approx(n2.value() / d2.value()).epsilon(1e-9));
}

TEST_CASE("degenerate inputs raise the explicit error") {
    TimeSeries zeros;
    zeros.p = 1;
    zeros.n = 10;
    zeros.values.assign(11, 0.0);
    CHECK_THROWS_AS(fit_ar1_coefficient(zeros), degenerate_input_error);
    CHECK_THROWS_AS(fit(zeros, Family::AR), degenerate_input_error);

    // all mass in one SETAR regime leaves the other coefficient unidentified
    TimeSeries pos;
    pos.p = 1;
    pos.n = 10;
    pos.values = {1.0, 1.1, 1.2, 1.1, 1.3, 1.2, 1.4, 1.1, 1.2, 1.3, 1.2};
    CHECK_THROWS_AS(fit(pos, Family::Setar211, ModelSpec::setar211(0.0, 0.0, 0.0)),
                    degenerate_input_error);
}

}  // TEST_SUITE
